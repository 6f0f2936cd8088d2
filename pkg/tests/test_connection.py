import itertools
import random

import pytest

from wittcrys import (InconsistentInput, RankDeficientLie, compile_system,
                      connection_input, embed, lie_basis, make_field,
                      reduce_by_lie_constraints, solve_over, variable_index)


def swap_inputs(field, da, z):
    """d_M = 2, eps = (0, 1), basis images swapped (the 2-cycle shape)."""
    e0, e1 = field.zero, field.one
    phi_im = [[e0, e1], [e1, e0]]
    a_bar = [[e0, e1], [e1, e0]]
    return connection_input(field, (0, 1), a_bar, da, phi_im, z)


def full_matrix_basis(field, dm):
    mats = []
    for i in range(dm):
        for j in range(dm):
            m = [[field.zero] * dm for _ in range(dm)]
            m[i][j] = field.one
            mats.append(m)
    return lie_basis(field, mats)


def check_original(sys_, vec, K):
    for r in range(sys_.nvars):
        acc = embed(sys_.C[r], K)
        for c in range(sys_.nvars):
            acc = acc + embed(sys_.B[r][c], K) * vec[c] ** K.p
        if acc != vec[r]:
            return False
    return True


def test_defining_relation_checked():
    F = make_field(3, 1)
    e0, e1 = F.zero, F.one
    da = [[[e0], [e0]], [[e0], [e0]]]
    with pytest.raises(InconsistentInput):
        connection_input(F, (0, 1), [[e1, e0], [e0, e1]],
                         da, [[e0, e1], [e1, e0]], [e0])
    with pytest.raises(InconsistentInput):
        # empty direction set is rejected
        connection_input(F, (0, 1), [[e0, e1], [e1, e0]],
                         [[[], []], [[], []]], [[e0, e1], [e1, e0]], [])


def test_variable_count_and_sparsity():
    rng = random.Random(31)
    F = make_field(3, 2)
    els = list(F.elements())
    for dm, dirs in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        # a permutation-shaped input: phi_images = permutation matrix
        perm = list(range(1, dm + 1))
        rng.shuffle(perm)
        eps = [rng.randint(0, 1) for _ in range(dm)]
        phi_im = [[F.one if s == perm[i] - 1 else F.zero for s in range(dm)]
                  for i in range(dm)]
        a_bar = [[phi_im[i][j] for i in range(dm)] for j in range(dm)]  # inverse of a permutation
        da = [[[rng.choice(els) for _ in range(dirs)] for _ in range(dm)] for _ in range(dm)]
        z = [rng.choice(els) for _ in range(dirs)]
        inp = connection_input(F, eps, a_bar, da, phi_im, z)
        sys_ = compile_system(inp)
        assert sys_.nvars == dm * dm * dirs
        for r in range(sys_.nvars):
            for c in range(sys_.nvars):
                if sys_.B[r][c]:
                    cslot, cl = divmod(c, dirs)
                    ip, i2 = divmod(cslot, dm)
                    rslot, rl = divmod(r, dirs)
                    assert (eps[ip], eps[i2]) == (0, 1)
                    assert cl == rl  # directions never couple


def test_origin_specialization_gives_singleton():
    F = make_field(2, 2)
    e0, e1 = F.zero, F.one
    da = [[[e1], [F.gen]], [[e0], [e1]]]
    inp = swap_inputs(F, da, [e0])
    sys_ = compile_system(inp)
    assert all(not x for row in sys_.B for x in row)
    sol = solve_over(sys_, 1)
    assert len(sol.all) == 1
    assert sol.all[0] == tuple(sys_.C)


def test_hand_expanded_two_by_two_fixture():
    # d_M = 2, d = 1, eps = (0, 1), swap shape, point z = 2 over F_3;
    # expected entries written out by hand from the coefficient identification
    F = make_field(3, 1)
    e0, e1 = F.zero, F.one
    two = F.element_from_int(2)
    da = [[[e1], [two]], [[e0], [e1]]]
    inp = swap_inputs(F, da, [two])
    sys_ = compile_system(inp)
    z2 = two * two  # z^(p-1)
    vi = lambda i, j: variable_index(2, 1, i, j, 1)
    expected_B = [[e0] * 4 for _ in range(4)]
    # the only (0,1) pair is (i', i2) = (1, 2); phi row 1 hits coordinate 2
    expected_B[vi(2, 1)][vi(1, 2)] = z2          # a_bar[1][2] = 1
    expected_B[vi(2, 2)][vi(1, 2)] = e0          # a_bar[2][2] = 0
    assert [list(r) for r in sys_.B] == expected_B
    expected_C = [e0] * 4
    for s in (1, 2):
        for j in (1, 2):
            acc = F.zero
            for i0 in (1, 2):
                acc = acc + inp.phi_images[i0 - 1][s - 1] * da[j - 1][i0 - 1][0]
            expected_C[vi(s, j)] = acc
    assert list(sys_.C) == expected_C


def test_full_space_reduction_is_identity():
    F = make_field(3, 1)
    e0, e1 = F.zero, F.one
    da = [[[e1], [e0]], [[e0], [e1]]]
    inp = swap_inputs(F, da, [F.element_from_int(2)])
    sys_ = compile_system(inp)
    red, rec = reduce_by_lie_constraints(sys_, full_matrix_basis(F, 2))
    assert red.B == sys_.B and red.C == sys_.C
    assert rec.pivot_slots == ()


def test_rank_deficient_lie_rejected():
    F = make_field(3, 1)
    e1 = F.one
    two = F.element_from_int(2)
    ident = [[e1, F.zero], [F.zero, e1]]
    doubled = [[two, F.zero], [F.zero, two]]
    da = [[[e1], [F.zero]], [[F.zero], [e1]]]
    inp = swap_inputs(F, da, [two])
    sys_ = compile_system(inp)
    with pytest.raises(RankDeficientLie):
        reduce_by_lie_constraints(sys_, lie_basis(F, [ident, doubled]))


def test_reduction_variable_counts():
    F = make_field(3, 1)
    e0, e1 = F.zero, F.one
    for dirs in (1, 2):
        da = [[[e1] * dirs, [e0] * dirs], [[e0] * dirs, [e1] * dirs]]
        z = [F.element_from_int(2)] * dirs
        inp = swap_inputs(F, da, z)
        sys_ = compile_system(inp)
        assert sys_.nvars == 4 * dirs
        lie = lie_basis(F, [[[e1, e0], [e0, e1]]])  # rank 1
        red, rec = reduce_by_lie_constraints(sys_, lie)
        assert red.nvars == 1 * dirs  # lie.dim per direction
        assert len(rec.pivot_slots) == 3 and len(rec.free_slots) == 1


def test_double_solve_correspondence():
    rng = random.Random(33)
    for p, deg in [(2, 2), (3, 2), (3, 1)]:
        F = make_field(p, deg)
        els = list(F.elements())
        for trial in range(6):
            dirs = rng.randint(1, 2)
            e0, e1 = F.zero, F.one
            da = [[[rng.choice(els) for _ in range(dirs)] for _ in range(2)]
                  for _ in range(2)]
            z = [rng.choice(els) for _ in range(dirs)]
            inp = swap_inputs(F, da, z)
            sys_ = compile_system(inp)
            basis_choices = [
                lie_basis(F, [[[e1, e0], [e0, e1]]]),
                lie_basis(F, [[[e1, e0], [e0, e1]], [[e0, e1], [e1, e0]]]),
            ]
            for lie in basis_choices:
                red, rec = reduce_by_lie_constraints(sys_, lie)
                assert red.nvars == lie.dim * dirs
                for ext in (1, 2):
                    full = solve_over(sys_, ext)
                    small = solve_over(red, ext)
                    K = full.field
                    recovered = set()
                    for y in small.all:
                        vec = rec.apply(y, K)
                        if check_original(sys_, vec, K):
                            recovered.add(tuple(x.coeffs for x in vec))
                    constrained = set()
                    for v in full.all:
                        if rec.satisfies_constraints(v, lie, K):
                            constrained.add(tuple(x.coeffs for x in v))
                    assert recovered == constrained


def test_reduced_count_bound():
    # the reduced system has lie.dim * dirs variables, so its geometric count
    # is at most p^(dim * dirs)
    from wittcrys import geometric_count
    F = make_field(3, 1)
    e0, e1 = F.zero, F.one
    da = [[[e1], [e0]], [[e0], [e1]]]
    inp = swap_inputs(F, da, [F.element_from_int(2)])
    sys_ = compile_system(inp)
    lie = lie_basis(F, [[[e1, e0], [e0, e1]]])
    red, _ = reduce_by_lie_constraints(sys_, lie)
    m, count = geometric_count(red)
    assert count <= 3 ** red.nvars
