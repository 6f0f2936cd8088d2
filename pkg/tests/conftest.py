import itertools

from wittcrys import CycleType


def all_cycle_types(d):
    """Every (permutation, eps) pair on {1..d}, each exactly once."""
    seen = set()
    for perm in itertools.permutations(range(1, d + 1)):
        pi = {i + 1: perm[i] for i in range(d)}
        cycles = []
        left = set(range(1, d + 1))
        while left:
            i = min(left)
            c = [i]
            left.remove(i)
            j = pi[i]
            while j != i:
                c.append(j)
                left.remove(j)
                j = pi[j]
            cycles.append(tuple(c))
        key = tuple(sorted(cycles))
        for eps in itertools.product((0, 1), repeat=d):
            if (key, eps) in seen:
                continue
            seen.add((key, eps))
            yield CycleType(cycles, eps)
