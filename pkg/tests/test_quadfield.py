import pytest
from sympy import primerange

from hvn.finitefield import GF
from hvn.quadfield import (fundamental_unit, kronecker, make_field, principal_generator, residue,
                           s_unit_square_classes, split_prime, valuation)


def kinds(K, p):
    return [(P.e, P.f) for P in split_prime(K, p)]


@pytest.mark.parametrize("d,disc,half", [(5, 5, True), (6, 24, False), (-2, -8, False), (-3, -3, True)])
def test_make_field(d, disc, half):
    K = make_field(d)
    assert K.disc == disc
    assert K.half == half


@pytest.mark.parametrize("d", [0, 1, 4, 12])
def test_make_field_rejects(d):
    with pytest.raises(ValueError):
        make_field(d)


def test_split_prime_q5(Q5):
    assert kinds(Q5, 7) == [(1, 2)]
    assert kinds(Q5, 11) == [(1, 1), (1, 1)]
    assert kinds(Q5, 5) == [(2, 1)]


def test_split_counts_sum_to_two(Q6):
    for p in primerange(2, 300):
        assert sum(P.e * P.f for P in split_prime(Q6, p)) == 2
        for P in split_prime(Q6, p):
            if P.f == 1:
                b, c = Q6.min_poly()
                assert (P.root ** 2 + b * P.root + c) % p == 0


def test_kronecker_matches_splitting(Q5):
    for p in primerange(3, 200):
        k = kronecker(Q5.disc, p)
        assert {1: [(1, 1), (1, 1)], -1: [(1, 2)], 0: [(2, 1)]}[k] == kinds(Q5, p)


@pytest.mark.parametrize("d,expected", [(5, (0, 1)), (6, (5, 2)), (7, (8, 3))])
def test_fundamental_unit(d, expected):
    K = make_field(d)
    u = fundamental_unit(K)
    assert (u.x, u.y) == expected
    assert abs(u.norm()) == 1


def test_fundamental_unit_pell_oracle():
    # least y > 0 with x^2 - 6 y^2 = +-1
    y = 1
    while True:
        for s in (1, -1):
            t = 6 * y * y + s
            x = int(t ** 0.5)
            if x * x == t:
                u = fundamental_unit(make_field(6))
                assert (u.x, u.y) == (x, y)
                return
        y += 1


def test_s_unit_classes_q6_empty(Q6):
    got = {(u.x, u.y) for u in s_unit_square_classes(Q6, set())}
    assert got == {(1, 0), (-1, 0), (5, 2), (-5, -2)}


def test_s_unit_classes_q5_with_5(Q5):
    classes = s_unit_square_classes(Q5, {5})
    assert len(classes) == 8
    assert any(u == Q5.sqrt_d() or u == -Q5.sqrt_d() for u in classes)
    for i, u in enumerate(classes):
        for v in classes[i + 1:]:
            assert not (u / v).is_square()


def test_s_unit_classes_imaginary():
    K = make_field(-2)
    assert {(u.x, u.y) for u in s_unit_square_classes(K, set())} == {(1, 0), (-1, 0)}


def test_valuation_examples(Q5):
    (P5,) = split_prime(Q5, 5)
    assert valuation(Q5(5), P5) == 2
    for P in split_prime(Q5, 3):
        assert valuation(Q5(2), P) == 0
    for P in split_prime(Q5, 11):
        assert valuation(Q5.omega(), P) == 0


def test_valuation_zero_raises(Q5):
    with pytest.raises(ValueError):
        valuation(Q5(0), split_prime(Q5, 5)[0])


def test_residue_examples(Q5, Q6):
    P = [P for P in split_prime(Q5, 11) if P.root is not None]
    # sqrt 5 = 2w - 1 maps to a square root of 5 mod 11
    for Pi in P:
        r = residue(Q5.sqrt_d(), Pi)
        assert r * r % 11 == 5
    for P in split_prime(Q6, 3):
        assert residue(Q6(7), P) == 1
    (P7,) = split_prime(Q6, 7)
    F = GF(7, 2)
    r = residue(Q6.sqrt_d(), P7)
    assert F.mul(r, r) == F(6)


def test_residue_rejects_negative_valuation(Q5):
    P = split_prime(Q5, 11)[0]
    with pytest.raises(ValueError):
        residue(Q5(1) / 11, P)


def test_principal_generator_norm(Q6):
    for p in (2, 3, 5, 19):
        for P in split_prime(Q6, p):
            k, g = principal_generator(P)
            assert abs(g.norm()) == P.norm ** k
            assert valuation(g, P) == k


def test_spec_inert_example_uses_seven(Q6):
    # 5 splits in Q(sqrt 6); 7 is the inert example
    assert kinds(Q6, 5) == [(1, 1), (1, 1)]
    assert kinds(Q6, 7) == [(1, 2)]
