import pytest

from hvn.congruence import (balanced_bound, balanced_constraints, candidate_pairs, e_tilde, feasible_i,
                            ij_solutions, lucas_power_trace, nonbalanced_sieve, prime_balance_bound,
                            refine_nonbalanced, totient_solutions)

TABLE = [
    (0, 3, 3, [13, 19, 37]),
    (0, 4, 4, [13]),
    (0, 6, 6, [13, 19, 37]),
    (0, 8, 8, [13, 17]),
    (0, 12, 12, [13, 19, 37]),
    (4, 8, 12, [29]),
]


@pytest.fixture(scope="module")
def table():
    return nonbalanced_sieve()


def test_g1_constrained_lcms():
    assert {s.lcm for s in totient_solutions(1, constrained=True)} == {1, 2, 3, 4, 6}


def test_g1_has_single_three():
    assert any(s.as_dict() == {3: 1} and s.lcm == 3 for s in totient_solutions(1))


def test_g_out_of_range():
    with pytest.raises(ValueError):
        totient_solutions(9)


@pytest.mark.parametrize("g,val", [(1, 6), (2, 12), (3, 30)])
def test_e_tilde(g, val):
    assert e_tilde(g) == val


def test_lucas_examples():
    assert lucas_power_trace(3, 5, 2) == -1
    assert lucas_power_trace(3, 5, 3) == -18
    assert lucas_power_trace(7, 11, 0) == 2
    with pytest.raises(ValueError):
        lucas_power_trace(1, 2, -1)


def test_ij_examples():
    assert ij_solutions(29, 12, 4) == [5, 12, 19, 26]
    sols = ij_solutions(47, 4, 2)
    assert 12 in sols and 35 in sols
    assert ij_solutions(31, 1, 7) == [7]


def test_balanced_constraints():
    assert balanced_constraints(11, 4)["feasible"]
    assert not balanced_constraints(13, 4)["feasible"]
    assert balanced_constraints(23, 12)["feasible"]


def test_candidate_pairs_exclude_balanced():
    assert all(j1 != j2 for j1, j2, _ in candidate_pairs())


def test_table_exact(table):
    assert table == TABLE


def test_sieve_preconditions():
    with pytest.raises(ValueError):
        nonbalanced_sieve(p_bound=7)
    with pytest.raises(ValueError):
        nonbalanced_sieve(ell_min=11)


def test_more_primes_cannot_grow(table):
    bigger = {(j1, j2, e): set(ells) for j1, j2, e, ells in nonbalanced_sieve(p_bound=23)}
    for j1, j2, e, ells in table:
        assert bigger.get((j1, j2, e), set()) <= set(ells)


def test_refinement(table):
    out = refine_nonbalanced(table)
    assert {p.ell for p in out} == {13, 19}
    assert {p.e for p in out} == {3, 6}
    assert all(p.j_pair[0] == 0 for p in out)


def test_refinement_eliminations():
    assert feasible_i(29, 12, 4, 8) == []
    assert feasible_i(13, 4, 0, 4) == []


def test_balanced_bound():
    assert balanced_bound(1, 1) == 81
    assert balanced_bound(2, 1) == 16785409
    assert balanced_bound(1, 1) < balanced_bound(2, 1) < balanced_bound(3, 1)


def test_prime_balance_bound():
    assert prime_balance_bound(1, 2, 12) == 4225
    assert prime_balance_bound(1, 4, 6) == 4225
    assert prime_balance_bound(2, 3, 4) == 200
    # odd e: ceiling of g (q^(e/2) + 1)^2
    assert prime_balance_bound(1, 2, 3) == 15
