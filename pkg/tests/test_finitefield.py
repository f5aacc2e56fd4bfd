import pytest

from hvn.finitefield import GF, canonical_modulus, legendre


def test_legendre_values():
    assert legendre(2, 7) == 1
    assert legendre(3, 7) == -1
    assert legendre(14, 7) == 0


def test_canonical_modulus_is_least_irreducible():
    a, b = canonical_modulus(5)
    assert (a, b) == (0, 2)
    assert all((x * x + a * x + b) % 5 for x in range(5))


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        GF(5, 2, modulus=(0, 4))


def test_f_out_of_range():
    with pytest.raises(ValueError):
        GF(5, 3)


@pytest.mark.parametrize("p,f", [(7, 1), (7, 2), (2, 2), (3, 2)])
def test_field_axioms_small(p, f):
    F = GF(p, f)
    elems = list(F.elements())
    assert len(elems) == F.q
    for x in elems:
        if not F.is_zero(x):
            assert F.mul(x, F.inv(x)) == F.one
            assert F.pow(x, F.q - 1) == F.one


def test_sqrt_in_extension():
    F = GF(11, 2)
    # every element of F_11 is a square in F_121
    for c in range(11):
        r = F.sqrt(F(c))
        assert F.mul(r, r) == F(c)
    n_sq = sum(1 for x in F.elements() if F.sqrt(x) is not None)
    assert n_sq == (F.q - 1) // 2 + 1


def test_nonsquare_f2_outside_prime_field():
    F = GF(13, 2)
    g = F.nonsquare()
    assert g[1] != 0 and F.chi(g) == -1


def test_quadratic_roots_char2():
    F = GF(2, 2)
    # t^2 + t + 1 is the modulus, so t is a root
    assert F.gen() in F.roots_quadratic(F.one, F.one)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        GF(7).inv(0)
