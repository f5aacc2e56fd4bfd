from math import isqrt

import pytest
from sympy import isprime, primerange

from hvn.quadfield import kronecker, make_field
from hvn.scarcity import (fundamental_discriminants, horizontal_report, horizontal_sieve, n_set, sqrt_mod,
                          vertical_report, vertical_sieve)


def n_set_oracle(ell, limit):
    # direct scan: least positive root of 4p mod ell, compared with 2 sqrt(p)
    out = []
    for p in primerange(2, limit):
        if p == ell:
            continue
        roots = [r for r in range(1, ell) if (r * r - 4 * p) % ell == 0]
        if roots and min(roots) ** 2 > 4 * p:
            out.append(p)
    return out


def test_n47():
    assert n_set(47) == [2, 3, 7, 17, 37, 53, 97]


def test_n103_size():
    assert len(n_set(103)) == 23


@pytest.mark.parametrize("ell", [11, 23, 47, 59])
def test_n_set_against_oracle(ell):
    assert n_set(ell) == n_set_oracle(ell, ell * ell)


def test_sqrt_mod():
    assert sqrt_mod(2, 7) == 3
    assert sqrt_mod(3, 7) is None
    with pytest.raises(ValueError):
        sqrt_mod(14, 7)


def test_fundamental_discriminants_oracle():
    def fundamental(D):
        if D % 4 == 1:
            return all(D % (k * k) for k in range(2, isqrt(abs(D)) + 1))
        if D % 4 == 0:
            m = D // 4
            return m % 4 in (2, 3) and all(m % (k * k) for k in range(2, isqrt(abs(m)) + 1))
        return False
    want = sorted([D for D in range(-300, 301) if D not in (0, 1) and fundamental(D)],
                  key=lambda D: (abs(D), D))
    assert [int(x) for x in fundamental_discriminants(300)] == want


def test_vertical_47_real():
    surv = vertical_sieve(47, 2500, real_only=True)
    assert surv[:2] == [5, 2309]
    assert surv == [5, 2309, 2477]


def test_2477_oracle():
    assert isprime(2477) and 2477 % 8 == 5
    assert all(kronecker(2477, p) == -1 for p in n_set(47))


def test_vertical_split_only_keeps_more():
    loose = set(vertical_sieve(47, 2500, real_only=True, ramified=False))
    tight = set(vertical_sieve(47, 2500, real_only=True))
    assert tight <= loose and 2309 in loose


def test_vertical_witnesses_split():
    rep = vertical_report(47, 500, real_only=True)
    for D, p in rep.witnesses.items():
        assert kronecker(D, p) in (0, 1)


def test_vertical_103_empty():
    assert vertical_sieve(103, 10 ** 6) == []


def test_horizontal_q7():
    K = make_field(7)
    assert horizontal_sieve(K, 164, 10 ** 7, 250) == []


def test_horizontal_witnesses():
    K = make_field(7)
    rep = horizontal_report(K, 5, 2000, 250)
    for ell, p in rep.witnesses.items():
        assert kronecker(K.disc, p) == 1
        assert kronecker(p, ell) == 1 and ell > 4 * p


def test_horizontal_small_ell_guard():
    with pytest.raises(ValueError):
        horizontal_report(make_field(7), 3, 100, 50)
