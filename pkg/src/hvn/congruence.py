"""Congruence machinery for Tate-Oort numbers of elliptic curves over quadratic fields.

Covers the totient identity and its maximal lcm, the power-trace recurrence, the
relation e*i = j (mod l-1), balanced feasibility, and the non-balanced sieve.
"""

from dataclasses import dataclass, field
from math import gcd, isqrt

from sympy import primerange, totient

E_VALUES = (2, 3, 4, 6, 8, 12)
MAX_G = 8


@dataclass(frozen=True)
class TotientSolution:
    multiplicities: tuple  # sorted (d, n_d) pairs with n_d > 0
    lcm: int
    g: int

    def as_dict(self):
        return dict(self.multiplicities)


@dataclass(frozen=True)
class TateOortProfile:
    ell: int
    e: int
    j_pair: tuple
    i_exponents: tuple = field(default=())

    @property
    def balanced(self):
        return self.j_pair[0] == self.j_pair[1] == self.e / 2

    @property
    def weakly_balanced(self):
        return sum(self.j_pair) == self.e


def _lcm(a, b):
    return a // gcd(a, b) * b


def _divisors_with_phi_at_most(n):
    # phi(d) >= sqrt(d/2), so d <= 2 n^2 bounds the search
    return [d for d in range(1, 2 * n * n + 1) if totient(d) <= n]


def totient_solutions(g, constrained=False):
    """All {d: n_d} with sum n_d phi(d) = 2g; optionally 2 | n_1 and 2 | n_2."""
    if not 1 <= g <= MAX_G:
        raise ValueError(f"g must be in 1..{MAX_G}")
    target = 2 * g
    ds = _divisors_with_phi_at_most(target)
    phis = [int(totient(d)) for d in ds]
    out = []

    def rec(k, remaining, chosen):
        if remaining == 0:
            mult = tuple(chosen)
            if constrained:
                m = dict(mult)
                if m.get(1, 0) % 2 or m.get(2, 0) % 2:
                    return
            L = 1
            for d, _ in mult:
                L = _lcm(L, d)
            out.append(TotientSolution(mult, L, g))
            return
        if k == len(ds):
            return
        d, ph = ds[k], phis[k]
        for n in range(remaining // ph, -1, -1):
            if n:
                chosen.append((d, n))
            rec(k + 1, remaining - n * ph, chosen)
            if n:
                chosen.pop()

    rec(0, target, [])
    return out


def e_tilde(g):
    """Largest lcm over unconstrained solutions of the totient identity."""
    return max(s.lcm for s in totient_solutions(g))


def lucas_power_trace(tau, q, m):
    """alpha^m + beta^m for the roots of T^2 - tau T + q."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    a, b = 2, tau
    if m == 0:
        return 2
    for _ in range(m - 1):
        a, b = b, tau * b - q * a
    return b


def ij_solutions(ell, e, j):
    """All i in [0, ell-2] with e*i = j (mod ell-1)."""
    n = ell - 1
    return [i for i in range(n) if (e * i - j) % n == 0]


def _ord2(n):
    return (n & -n).bit_length() - 1


def balanced_constraints(ell, e, quadratic=True):
    """Feasibility of j_1 = j_2 = e/2 at ell for an elliptic curve."""
    reasons = []
    if e % 2:
        reasons.append("e is odd")
    elif not ij_solutions(ell, e, e // 2):
        reasons.append("no i with e*i = e/2 mod ell-1")
    if _ord2(e) <= _ord2(ell - 1):
        reasons.append("ord2(e) <= ord2(ell-1)")
    if quadratic and ell > 3:
        if ell % 4 != 3:
            reasons.append("ell != 3 mod 4")
        if e == 12 and ell % 12 != 11:
            reasons.append("e = 12 needs ell = 11 mod 12")
    return {"ell": ell, "e": e, "feasible": not reasons, "reasons": reasons}


def candidate_pairs(e_values=E_VALUES):
    """(j1, j2, e) with 0 <= j1 < j2 <= e and j1 + j2 = e."""
    out = []
    for e in e_values:
        for j1 in range(e + 1):
            j2 = e - j1
            if j1 < j2:
                out.append((j1, j2, e))
    return sorted(out)


def _hasse_range(q):
    s = isqrt(4 * q)
    return range(-s, s + 1)


def _tau_tables(p_bound, e_values):
    # tau_e for every (p, f, tau) with |tau| <= 2 sqrt(q)
    tables = {}
    for p in primerange(2, p_bound + 1):
        for f in (1, 2):
            q = p ** f
            for e in e_values:
                tables[(p, f, e)] = (q, [lucas_power_trace(t, q, e) for t in _hasse_range(q)])
    return tables


def _survives(ell, j1, j2, e, tables, p_bound):
    if j1 % gcd(e, ell - 1):
        return False
    for p in primerange(2, p_bound + 1):
        if p == ell:
            continue
        ok = False
        for f in (1, 2):
            q, taus = tables[(p, f, e)]
            target = (q ** j1 + q ** j2) % ell
            if any(t % ell == target for t in taus):
                ok = True
                break
        if not ok:
            return False
    return True


def nonbalanced_sieve(p_bound=11, ell_min=13, ell_max=1000, e_values=E_VALUES):
    """Rows (j1, j2, e, [surviving ell]) for weakly balanced, non-balanced pairs."""
    if p_bound < 11:
        raise ValueError("p_bound must be at least 11")
    if ell_min < 13:
        raise ValueError("ell_min must be at least 13")
    tables = _tau_tables(p_bound, e_values)
    rows = []
    for j1, j2, e in candidate_pairs(e_values):
        ells = [ell for ell in primerange(ell_min, ell_max + 1)
                if _survives(ell, j1, j2, e, tables, p_bound)]
        if ells:
            rows.append((j1, j2, e, ells))
    return rows


def feasible_i(ell, e, j1, j2, check_primes=(2, 5)):
    """Exponents i (of chi on the first diagonal entry) compatible with Hasse at every check prime.

    The second diagonal exponent is 1 - i; both must reproduce the Tate-Oort pair.
    """
    n = ell - 1
    cands = [i for i in ij_solutions(ell, e, j1) if (e * (1 - i) - j2) % n == 0]
    for p in check_primes:
        if p == ell:
            continue
        keep = []
        for i in cands:
            for f in (1, 2):
                q = p ** f
                t = (pow(q, i, ell) + pow(q, (1 - i) % n, ell)) % ell
                if any(tau % ell == t for tau in _hasse_range(q)):
                    keep.append(i)
                    break
        cands = keep
    return cands


def refine_nonbalanced(table, check_primes=(2, 5)):
    """Apply the ell != 1 (mod h) obstruction and the Hasse checks; return surviving profiles."""
    out = []
    for j1, j2, e, ells in table:
        for ell in ells:
            if e > 6:
                # e = 2h with h in {4, 6}: ramified, f = 1, n_h = 1
                h = e // 2
                if ell % h == 1:
                    continue
            i_ok = feasible_i(ell, e, j1, j2, check_primes)
            if not i_ok:
                continue
            out.append(TateOortProfile(ell, e, (j1, j2), tuple(i_ok)))
    return out


def balanced_bound(n, g):
    """g (2^(n^2 e~(g)/2) + 1)^2."""
    if not 1 <= g <= MAX_G:
        raise ValueError(f"g must be in 1..{MAX_G}")
    k = n * n * e_tilde(g)
    if k % 2:
        # 2^(k/2) irrational: take the ceiling of g (2^k + 2 * 2^(k/2) + 1)
        return g * (2 ** k + 1) + _ceil_sqrt(4 * g * g * 2 ** k)
    return g * (2 ** (k // 2) + 1) ** 2


def _ceil_sqrt(n):
    r = isqrt(n)
    return r if r * r == n else r + 1


def prime_balance_bound(g, q, e):
    """Ceiling of g (q^(e/2) + 1)^2."""
    if e % 2 == 0:
        return g * (q ** (e // 2) + 1) ** 2
    return g * (q ** e + 1) + _ceil_sqrt(4 * g * g * q ** e)

