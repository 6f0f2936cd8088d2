import random

import pytest

from wittcrys import (IncompatibleFields, NotPrime, ReducibleModulus, embed,
                      frobenius, make_field)


def test_prime_field_modulus_is_x():
    F = make_field(2, 1)
    assert F.modulus == (0, 1)
    assert F.order == 2


def test_f9_with_x2_plus_1_accepted():
    # -1 is a non-square mod 3: x^2 + 1 has no root, hence irreducible
    assert not any(pow(a, 2, 3) == 2 for a in range(3))
    F = make_field(3, 2, (1, 0, 1))
    assert F.modulus == (1, 0, 1)


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        make_field(3, 2, (-1, 0, 1))  # x^2 - 1 = (x-1)(x+1)


def test_non_monic_or_wrong_degree_rejected():
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, (1, 1))
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, (1, 1, 0, 1))


def test_not_prime():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(NotPrime):
        make_field(1, 1)


def test_default_modulus_deterministic_and_smallest():
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)  # x^2 + x + 1 is the only degree-2 option
    assert make_field(2, 2) is F   # interned


def test_frobenius_examples():
    F4 = make_field(2, 2)
    g = F4.gen
    assert g * g == g + 1            # modulus x^2 + x + 1
    assert frobenius(g, 0) == g
    assert frobenius(g, 1) == g + 1  # squaring
    assert frobenius(g + 1, -1) == g


def test_frobenius_properties():
    rng = random.Random(2)
    for (p, n) in [(2, 3), (3, 2), (5, 2)]:
        F = make_field(p, n)
        els = list(F.elements())
        for _ in range(80):
            a, b = rng.choice(els), rng.choice(els)
            assert frobenius(a, n) == a
            assert frobenius(frobenius(a, 1), -1) == a
            assert frobenius(a + b, 1) == frobenius(a, 1) + frobenius(b, 1)
            assert frobenius(a * b, 1) == frobenius(a, 1) * frobenius(b, 1)


def test_field_axioms_random():
    rng = random.Random(3)
    for (p, n) in [(2, 4), (3, 3), (5, 1), (7, 2)]:
        F = make_field(p, n)
        els = list(F.elements())
        for _ in range(120):
            a, b, c = (rng.choice(els) for _ in range(3))
            assert a + b == b + a and a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + F.zero == a and a * F.one == a
            if a:
                assert a * a.inverse() == F.one


def test_embed_examples():
    F2, F16 = make_field(2, 1), make_field(2, 4)
    assert embed(F2.one, F16) == F16.one
    F3, F81 = make_field(3, 1), make_field(3, 4)
    assert embed(F3.zero, F81) == F81.zero
    F4 = make_field(2, 2)
    z = embed(F4.gen, F16)
    assert z * z == z + 1  # satisfies the subfield modulus


def test_embed_is_injective_ring_hom():
    F4, F16 = make_field(2, 2), make_field(2, 4)
    images = {}
    for a in F4.elements():
        for b in F4.elements():
            assert embed(a + b, F16) == embed(a, F16) + embed(b, F16)
            assert embed(a * b, F16) == embed(a, F16) * embed(b, F16)
        images[a.coeffs] = embed(a, F16).coeffs
    assert len(set(images.values())) == F4.order


def test_embed_commutes_with_frobenius():
    F9, F81 = make_field(3, 2), make_field(3, 4)
    for a in F9.elements():
        assert embed(frobenius(a, 1), F81) == frobenius(embed(a, F81), 1)


def test_incompatible_fields():
    F4, F8 = make_field(2, 2), make_field(2, 3)
    with pytest.raises(IncompatibleFields):
        embed(F4.gen, F8)  # 2 does not divide 3
    with pytest.raises(IncompatibleFields):
        F4.gen + F8.gen
