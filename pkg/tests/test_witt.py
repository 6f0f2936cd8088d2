import random

import pytest

from wittcrys import (MismatchedStructure, WittVector, frobenius, make_field,
                      sigma, sigma_inv, teichmuller, verschiebung, witt_add,
                      witt_from_int, witt_mul, witt_neg, witt_one,
                      witt_p_power, witt_structure, witt_zero)
from wittcrys.witt import PRECISION_CAP


def rand_vec(st, F, rng):
    els = list(F.elements())
    return WittVector(st, F, tuple(rng.choice(els) for _ in range(st.m)))


def test_length_one_structure_is_the_field():
    st = witt_structure(5, 1)
    assert str(st.sum_polys[0]) in ("x0 + y0",)
    assert str(st.prod_polys[0]) == "x0*y0"


def test_first_carry_polynomials():
    # solve (x0+y0)^2 + 2 S1 = x0^2 + 2 x1 + y0^2 + 2 y1
    st = witt_structure(2, 2)
    assert str(st.sum_polys[1]) == "-x0*y0 + x1 + y1"
    st3 = witt_structure(3, 2)
    assert str(st3.sum_polys[1]) == "-x0**2*y0 - x0*y0**2 + x1 + y1"


def test_one_plus_one_in_w2_f2():
    # W_2(F_2) is the integers mod 4: 1 + 1 = 2 = (0, 1)
    st = witt_structure(2, 2)
    F = make_field(2, 1)
    one = witt_one(st, F)
    two = witt_add(one, one)
    assert two.comps[0] == F.zero and two.comps[1] == F.one


def test_wm_fp_is_integers_mod_pm():
    for (p, m) in [(2, 3), (3, 2), (5, 2)]:
        st = witt_structure(p, m)
        F = make_field(p, 1)
        pm = p ** m
        for a in range(0, pm, max(1, pm // 10)):
            for b in range(0, pm, max(1, pm // 10)):
                assert witt_add(witt_from_int(st, F, a), witt_from_int(st, F, b)) \
                    == witt_from_int(st, F, a + b)
                assert witt_mul(witt_from_int(st, F, a), witt_from_int(st, F, b)) \
                    == witt_from_int(st, F, a * b)


def test_additive_identity_and_mult_identity():
    st = witt_structure(3, 2)
    F = make_field(3, 2)
    rng = random.Random(5)
    a = rand_vec(st, F, rng)
    assert a + witt_zero(st, F) == a
    assert witt_mul(witt_one(st, F), witt_one(st, F)) == witt_one(st, F)


def test_ring_axioms_random_samples():
    rng = random.Random(6)
    for (p, n, m) in [(2, 1, 4), (2, 2, 3), (3, 2, 4), (3, 1, 3), (5, 2, 3)]:
        st = witt_structure(p, m)
        F = make_field(p, n)
        for _ in range(60):
            a, b, c = (rand_vec(st, F, rng) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + (-a) == witt_zero(st, F)


def test_structure_polynomial_route_agrees_with_fast_route():
    rng = random.Random(7)
    for (p, n, m) in [(2, 2, 4), (3, 2, 3), (3, 1, 4), (5, 1, 2)]:
        st = witt_structure(p, m)
        F = make_field(p, n)
        for _ in range(25):
            a, b = rand_vec(st, F, rng), rand_vec(st, F, rng)
            assert witt_add(a, b) == st.sum_via_polynomials(a, b)
            assert witt_mul(a, b) == st.prod_via_polynomials(a, b)
            assert witt_neg(a) == st.neg_via_polynomials(a)


def test_verschiebung_shift_and_p_multiplication():
    st = witt_structure(2, 2)
    F = make_field(2, 1)
    v = verschiebung(witt_one(st, F))
    assert v.comps == (F.zero, F.one)
    # V(sigma(a)) = p * a, with p = 1 + 1 + ... + 1
    rng = random.Random(8)
    st9 = witt_structure(3, 3)
    F9 = make_field(3, 2)
    p_as_sum = witt_zero(st9, F9)
    for _ in range(3):
        p_as_sum = p_as_sum + witt_one(st9, F9)
    assert p_as_sum == witt_p_power(st9, F9, 1)
    for _ in range(100):
        a = rand_vec(st9, F9, rng)
        assert verschiebung(sigma(a)) == witt_mul(p_as_sum, a)
        assert sigma(verschiebung(a)) == witt_mul(p_as_sum, a)


def test_teichmuller_multiplicative():
    F4 = make_field(2, 2)
    g = F4.gen
    assert witt_mul(teichmuller(g, 2), teichmuller(g * g, 2)) == teichmuller(g * g * g, 2)
    assert teichmuller(g * g * g, 2) == witt_one(witt_structure(2, 2), F4)
    rng = random.Random(9)
    F9 = make_field(3, 2)
    for _ in range(50):
        x, y = rng.choice(list(F9.elements())), rng.choice(list(F9.elements()))
        assert witt_mul(teichmuller(x, 3), teichmuller(y, 3)) == teichmuller(x * y, 3)


def test_sigma_is_ring_endomorphism_and_p_power_mod_v():
    rng = random.Random(10)
    st = witt_structure(3, 3)
    F = make_field(3, 2)
    for _ in range(60):
        a, b = rand_vec(st, F, rng), rand_vec(st, F, rng)
        assert sigma(a + b) == sigma(a) + sigma(b)
        assert sigma(a * b) == witt_mul(sigma(a), sigma(b))
        assert sigma_inv(sigma(a)) == a
        # sigma(a) == a^p modulo V(W_{m-1}): first components agree
        assert (sigma(a) - a ** 3).comps[0] == F.zero
    # sigma on prime-field coefficients is the identity
    stp = witt_structure(2, 3)
    Fp = make_field(2, 1)
    for _ in range(20):
        a = rand_vec(stp, Fp, rng)
        assert sigma(a) == a
    # sigma(teichmuller(x)) = teichmuller(x^p)
    g = F.gen
    assert sigma(teichmuller(g, 3)) == teichmuller(frobenius(g, 1), 3)


def test_p_power_truncation():
    for (p, n, m) in [(2, 1, 3), (3, 2, 2)]:
        st = witt_structure(p, m)
        F = make_field(p, n)
        rng = random.Random(11)
        pm = witt_from_int(st, F, p ** m)
        assert pm == witt_zero(st, F)
        for _ in range(30):
            a = rand_vec(st, F, rng)
            assert witt_mul(pm, a) == witt_zero(st, F)
        assert witt_from_int(st, F, p ** (m - 1)) != witt_zero(st, F)


def test_ghost_identities_verified_at_construction():
    # construction of these would raise if the ghost identities failed
    for (p, m) in [(2, 4), (3, 4), (5, 3)]:
        st = witt_structure(p, m)
        assert len(st.sum_polys) == m


def test_mismatched_structures_rejected():
    a = witt_one(witt_structure(2, 2), make_field(2, 1))
    b = witt_one(witt_structure(2, 3), make_field(2, 1))
    c = witt_one(witt_structure(2, 2), make_field(2, 2))
    with pytest.raises(MismatchedStructure):
        witt_add(a, b)
    with pytest.raises(MismatchedStructure):
        witt_mul(a, c)


def test_precision_cap():
    with pytest.raises(ValueError):
        witt_structure(2, PRECISION_CAP + 1)
