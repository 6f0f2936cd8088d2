import itertools
import random

import pytest

from wittcrys import (NotSingular, as_system, boundary_test,
                      eliminate_variable, embed, geometric_count, make_field,
                      moore_determinant, solve_over)


def brute_force(sys_, K):
    """Enumerate K^n and keep the vectors satisfying x = B x^[p] + C."""
    els = list(K.elements())
    Bk = [[embed(e, K) for e in row] for row in sys_.B]
    Ck = [embed(e, K) for e in sys_.C]
    out = []
    for combo in itertools.product(els, repeat=sys_.nvars):
        good = True
        for r in range(sys_.nvars):
            acc = Ck[r]
            for i in range(sys_.nvars):
                acc = acc + Bk[r][i] * combo[i] ** K.p
            if acc != combo[r]:
                good = False
                break
        if good:
            out.append(combo)
    return sorted(out, key=lambda v: tuple(x.coeffs for x in v))


def random_system(rng, p=None, base_degree=None, n=None):
    p = p or rng.choice([2, 3])
    base = make_field(p, base_degree or rng.randint(1, 2))
    n = n or rng.randint(1, 2)
    els = list(base.elements())
    B = [[rng.choice(els) for _ in range(n)] for _ in range(n)]
    C = [rng.choice(els) for _ in range(n)]
    return as_system(base, B, C)


def test_no_frobenius_term_unique_solution():
    F = make_field(2, 1)
    sys_ = as_system(F, [[F.zero]], [F.one])
    sol = solve_over(sys_, 1)
    assert sol.all == ((F.one,),)
    assert len(sol.homogeneous) == 1


def test_x_equals_x_squared_over_f2():
    F = make_field(2, 1)
    sys_ = as_system(F, [[F.one]], [F.zero])
    sol = solve_over(sys_, 1)
    assert [v[0].coeffs for v in sol.all] == [(0,), (1,)]
    assert len(sol.homogeneous) == 2  # p^1


def test_solve_over_matches_enumeration():
    rng = random.Random(21)
    for _ in range(50):
        sys_ = random_system(rng)
        ext = rng.randint(1, 2)
        sol = solve_over(sys_, ext)
        expected = brute_force(sys_, sol.field)
        assert [tuple(x.coeffs for x in v) for v in sol.all] \
            == [tuple(x.coeffs for x in v) for v in expected]


def test_torsor_structure():
    rng = random.Random(22)
    for _ in range(40):
        sys_ = random_system(rng)
        sol = solve_over(sys_, rng.randint(1, 2))
        # homogeneous solutions form a group
        hset = {tuple(x.coeffs for x in v) for v in sol.homogeneous}
        for a in sol.homogeneous:
            for b in sol.homogeneous:
                s = tuple(x + y for x, y in zip(a, b))
                assert tuple(x.coeffs for x in s) in hset
            neg = tuple(-x for x in a)
            assert tuple(x.coeffs for x in neg) in hset
        # all = particular + homogeneous
        if sol.particular is not None:
            translated = sorted(
                (tuple(x + y for x, y in zip(sol.particular, h)) for h in sol.homogeneous),
                key=lambda v: tuple(x.coeffs for x in v))
            assert tuple(tuple(x.coeffs for x in v) for v in translated) \
                == tuple(tuple(x.coeffs for x in v) for v in sol.all)
        else:
            assert sol.all == ()


def test_homogeneous_count_is_p_power_and_bounded():
    rng = random.Random(23)
    for _ in range(40):
        sys_ = random_system(rng, n=rng.randint(1, 3))
        p = sys_.field.p
        sol = solve_over(sys_, 1)
        k = len(sol.homogeneous)
        m = 0
        while p ** m < k:
            m += 1
        assert p ** m == k and m <= sys_.nvars


def test_geometric_count_trivial_cases():
    F = make_field(3, 2)
    zero, one = F.zero, F.one
    n = 3
    B0 = [[zero] * n for _ in range(n)]
    m, count = geometric_count(as_system(F, B0, [zero] * n))
    assert (m, count) == (0, 1)
    Bi = [[one if i == j else zero for j in range(n)] for i in range(n)]
    m, count = geometric_count(as_system(F, Bi, [zero] * n))
    assert (m, count) == (n, 3 ** n)


def test_geometric_count_twist_order_nilpotent_example():
    # rank-1 matrix whose twisted square vanishes: iterating x -> B x^[p]
    # kills everything, so the count is 1 even though B^[p] B has rank 1
    F8 = make_field(2, 3)
    a = F8.gen
    u = [F8.one, a]
    v = [a * a, F8.one]
    B = [[u[i] * v[j] for j in range(2)] for i in range(2)]
    sys_ = as_system(F8, B, [F8.zero] * 2)
    m, count = geometric_count(sys_)
    assert (m, count) == (0, 1)
    for ext in (1, 2, 3, 6):
        assert len(solve_over(sys_, ext).homogeneous) == 1


def test_geometric_count_matches_adaptive_sweep():
    rng = random.Random(24)
    for _ in range(30):
        sys_ = random_system(rng, n=rng.randint(1, 3))
        p = sys_.field.p
        mg, _ = geometric_count(sys_)
        best = 0
        for ext in range(1, 25):
            k = len(solve_over(sys_, ext).homogeneous)
            m = 0
            while p ** m < k:
                m += 1
            assert m <= mg
            best = max(best, m)
            if best == mg:
                break
        assert best == mg


def test_counts_divide_geometric_count_degrees_1_to_6():
    rng = random.Random(25)
    for _ in range(12):
        sys_ = random_system(rng, base_degree=1, n=rng.randint(1, 3))
        p = sys_.field.p
        mg, count = geometric_count(sys_)
        for ext in range(1, 7):
            k = len(solve_over(sys_, ext).homogeneous)
            assert count % k == 0


def test_boundary_test():
    F = make_field(2, 2)
    g = F.gen
    invertible = [[g, F.zero], [F.zero, F.one]]
    assert not boundary_test(as_system(F, invertible, [F.zero] * 2))
    zero_b = [[F.zero] * 2 for _ in range(2)]
    assert boundary_test(as_system(F, zero_b, [F.zero] * 2))
    equal_rows = [[g, g + 1], [g, g + 1]]
    assert boundary_test(as_system(F, equal_rows, [F.one, g]))


def test_eliminate_variable_full_degeneration():
    F = make_field(3, 1)
    c = [F.one, F.element_from_int(2)]
    sys_ = as_system(F, [[F.zero] * 2 for _ in range(2)], c)
    red, rec = eliminate_variable(sys_)
    assert red.nvars == 1
    sol = solve_over(red, 1)
    full = [rec.apply(v, sol.field) for v in sol.all]
    assert full == [tuple(c)]


def test_eliminate_variable_bijection():
    rng = random.Random(26)
    done = 0
    while done < 60:
        sys_ = random_system(rng, n=rng.randint(2, 3))
        if not boundary_test(sys_):
            with pytest.raises(NotSingular):
                eliminate_variable(sys_)
            continue
        done += 1
        red, rec = eliminate_variable(sys_)
        assert red.nvars == sys_.nvars - 1
        for ext in (1, 2):
            full = solve_over(sys_, ext)
            small = solve_over(red, ext)
            recovered = sorted((rec.apply(v, full.field) for v in small.all),
                               key=lambda v: tuple(x.coeffs for x in v))
            assert [tuple(x.coeffs for x in v) for v in recovered] \
                == [tuple(x.coeffs for x in v) for v in full.all]


def test_iterated_elimination_terminates():
    rng = random.Random(27)
    for _ in range(40):
        sys_ = random_system(rng, n=3)
        steps = 0
        while sys_.nvars and boundary_test(sys_):
            sys_, _ = eliminate_variable(sys_)
            steps += 1
        assert steps <= 3
        assert sys_.nvars == 0 or not boundary_test(sys_)


def test_moore_determinant_examples():
    F4 = make_field(2, 2)
    g = F4.gen
    assert moore_determinant([g]) == g
    assert moore_determinant([F4.one, g]) == F4.one  # det [[1,1],[g,g^2]] = g^2 - g = 1
    for x in F4.elements():
        assert not moore_determinant([F4.one, x, F4.one + x])


def test_moore_determinant_iff_independence():
    from wittcrys.linalg import fp_rref
    for (p, n) in [(2, 3), (3, 2)]:
        F = make_field(p, n)
        els = list(F.elements())
        for size in (1, 2, 3):
            for combo in itertools.combinations(els, size):
                det_nonzero = bool(moore_determinant(list(combo)))
                # independent over F_p <=> coefficient rows have full rank
                rows = [list(x.coeffs) for x in combo]
                r = len(fp_rref(rows, p)[1])
                assert det_nonzero == (r == size)
