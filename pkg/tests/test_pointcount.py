import random

import pytest
from sympy import primerange

from hvn.finitefield import GF
from hvn.pointcount import (CurveOverFq, count, count_bsgs, count_exhaustive, hasse_ok,
                            quadratic_character)
from oracles import brute_count


def test_small_examples():
    assert count(CurveOverFq(GF(5), [0, 0, 0, 0, 1])) == 6
    assert count(CurveOverFq(GF(5), [0, 0, 0, 1, 0])) == 4


def test_singular_rejected():
    with pytest.raises(ValueError):
        CurveOverFq(GF(7), [0, 0, 0, 0, 0])


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13, 31])
def test_long_form_against_brute_force(p):
    rng = random.Random(p)
    done = 0
    while done < 5:
        c = [rng.randrange(p) for _ in range(5)]
        try:
            E = CurveOverFq(GF(p), c)
        except ValueError:
            continue
        assert count_exhaustive(E) == brute_count(p, c)
        done += 1


@pytest.mark.parametrize("p", [233, 1009, 4999, 10007])
def test_bsgs_matches_exhaustive(p):
    rng = random.Random(p)
    for _ in range(4):
        c = [0, 0, 0, rng.randrange(p), rng.randrange(p)]
        try:
            E = CurveOverFq(GF(p), c)
        except ValueError:
            continue
        assert count_bsgs(E, seed=1) == count_exhaustive(E, limit=p)


@pytest.mark.parametrize("p", [5, 7, 11, 101, 211])
def test_base_change_to_quadratic_extension(p):
    c = [1, 0, 1, 2, 3] if p != 5 else [0, 0, 0, 1, 1]
    E1 = CurveOverFq(GF(p), c)
    a = p + 1 - count(E1)
    E2 = CurveOverFq(GF(p, 2), c)
    assert count(E2) == p * p + 1 - (a * a - 2 * p)


def test_bsgs_over_quadratic_extension():
    p = 113
    E = CurveOverFq(GF(p, 2), [0, 0, 0, 3, 7])
    assert count_bsgs(E, seed=3) == count_exhaustive(E, limit=p * p)


def test_hasse():
    for p in primerange(5, 400):
        n = count(CurveOverFq(GF(p), [0, 0, 0, 1, 1])) if (4 + 27) % p else None
        if n is not None:
            assert hasse_ok(p, n)


def test_quadratic_character():
    F = GF(7)
    assert [quadratic_character(F, x) for x in range(7)] == [0, 1, 1, -1, 1, -1, -1]
    F2 = GF(7, 2)
    vals = [quadratic_character(F2, x) for x in F2.elements()]
    assert vals.count(1) == vals.count(-1) == 24


def test_seed_does_not_change_count():
    E = CurveOverFq(GF(20011), [0, 0, 0, 5, 9])
    assert len({count(E, seed=s) for s in range(4)}) == 1
