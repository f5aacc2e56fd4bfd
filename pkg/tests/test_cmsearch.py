import mpmath
import pytest

from hvn.cmsearch import (CSV_HEADER, _solve_f2, assemble, class_number, class_number_2_discs,
                          compare_with_reference, curve_from_j, hilbert_class_poly, isogeny_prime_candidates,
                          j_qseries, j_roots, load_reference, order_disc, reduced_forms, twist_search)
from hvn.ellcurve import good_outside
from hvn.quadfield import kronecker, make_field
from oracles import brute_forms, class_number_oracle

H2_DISCS = [-15, -20, -24, -32, -35, -36, -40, -48, -51, -52, -60, -64, -72, -75, -88, -91, -99,
            -100, -112, -115, -123, -147, -148, -187, -232, -235, -267, -403, -427]


def test_class_number_against_dirichlet():
    for n in range(3, 1001):
        D = -n
        if D % 4 in (0, 1):
            assert class_number(D) == class_number_oracle(D), D


def test_reduced_forms_against_scan():
    for D in (-15, -20, -84, -231, -427, -999):
        assert set(reduced_forms(D)) == brute_forms(D)


def test_h2_list():
    assert [d.D for d in class_number_2_discs()] == H2_DISCS


def test_order_disc():
    o = order_disc(-72)
    assert (o.m, o.f, o.h, o.field_disc) == (2, 3, 2, -8)
    o = order_disc(-235)
    assert (o.m, o.f) == (235, 1)
    with pytest.raises(ValueError):
        order_disc(-13)


def test_small_hilbert_polys():
    assert hilbert_class_poly(-3) == [1, 0]
    assert hilbert_class_poly(-4) == [1, -1728]
    assert hilbert_class_poly(-15) == [1, 191025, -121287375]


def test_qseries_against_kleinj():
    tau = mpmath.mpc(0.1, 1.3)
    with mpmath.workdps(40):
        ref = 1728 * mpmath.kleinj(tau)
        assert abs(j_qseries(tau, 40) - ref) < mpmath.mpf(10) ** -25 * abs(ref)


@pytest.mark.parametrize("D", H2_DISCS)
def test_hilbert_against_kleinj(D):
    H = hilbert_class_poly(D)
    with mpmath.workdps(80 + 2 * len(str(abs(H[-1])))):
        rD = mpmath.sqrt(mpmath.mpf(D))
        for a, b, _ in reduced_forms(D):
            j = 1728 * mpmath.kleinj((-b + rD) / (2 * a))
            val = H[0] * j * j + H[1] * j + H[2]
            assert abs(val) < mpmath.mpf(10) ** -10 * (abs(H[2]) + 1)


def test_root_fields():
    K, roots = j_roots(-235)
    assert K.d == 5 and len(roots) == 2
    K, _ = j_roots(-72)
    assert K.d == 6


def test_curve_from_j():
    K, roots = j_roots(-235)
    for j in roots:
        E = curve_from_j(j, K)
        assert E.j == j
    Q5 = make_field(5)
    assert not curve_from_j(0, Q5).j
    assert curve_from_j(1728, Q5).j == Q5(1728)


def test_isogeny_candidates():
    c = isogeny_prime_candidates(-235)
    assert 5 in c and 47 in c and 2 not in c
    assert all(kronecker(-235, ell) != -1 for ell in c)


def test_solve_f2():
    # x0 + x1 = 1, x1 + x2 = 0 over F_2^3
    sols = _solve_f2([0b011, 0b110], [1, 0], 3)
    assert sorted(sols) == sorted(x for x in range(8)
                                  if ((x & 1) ^ (x >> 1 & 1)) == 1 and ((x >> 1 & 1) ^ (x >> 2 & 1)) == 0)
    assert _solve_f2([0b1, 0b1], [0, 1], 1) == []


def test_twist_search_235():
    K, roots = j_roots(-235)
    twists = twist_search(curve_from_j(roots[0], K), 47)
    assert twists
    for T in twists:
        assert T.j == roots[0]
        assert good_outside(T, {47})[0]


def test_reference_table():
    ref = load_reference()
    assert len(ref) == 30
    assert {r["first"] for r in ref} >= {"47.5.1", "*6.24.1", "*2.28.4", "7.61.1"}


def test_compare_reports_missing_rows():
    cmp = compare_with_reference([])
    assert len(cmp) == 30 and not any(c["match"] for c in cmp)


def test_assemble_empty():
    assert assemble([]) == []
    assert CSV_HEADER[:2] == ["label", "ell"]
