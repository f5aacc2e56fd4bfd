"""Scarcity sieves: the sets N(ell) and the field and prime eliminations built on them."""

from dataclasses import dataclass, field

import numpy as np
from sympy import primerange

from .finitefield import GF, legendre
from .quadfield import kronecker


@dataclass(frozen=True)
class ScarcityReport:
    ell: object
    n_set: tuple
    survivors: tuple
    witnesses: dict = field(default_factory=dict)

    def to_json(self):
        return {"ell": self.ell, "n_set": list(self.n_set), "survivors": list(self.survivors),
                "eliminated": len(self.witnesses)}


def sqrt_mod(N, ell):
    """Least positive r with r^2 = N (mod ell), or None if N is a non-residue."""
    if N % ell == 0:
        raise ValueError("ell divides N")
    r = GF(ell).sqrt(N % ell)
    if r is None:
        return None
    return min(r, ell - r)


def n_set(ell):
    """Primes p with (p/ell) = 1 and r_ell(4p) > 2 sqrt(p); complete since p <= ell^2/16."""
    if ell < 7:
        raise ValueError("ell must be at least 7")
    out = []
    for p in primerange(2, ell * ell // 16 + 1):
        if legendre(p, ell) != 1:
            continue
        r = sqrt_mod(4 * p, ell)
        if r * r > 4 * p:
            out.append(p)
    return out


def _squarefree_mask(n):
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    k = 2
    while k * k <= n:
        mask[k * k::k * k] = False
        k += 1
    return mask


def fundamental_discriminants(bound, real_only=False):
    """Fundamental discriminants D != 1 with |D| <= bound, ordered by (|D|, D)."""
    sf = _squarefree_mask(bound)
    out = []
    for sign in ((1,) if real_only else (1, -1)):
        m = np.arange(bound + 1, dtype=np.int64)
        # D = s*m with s*m = 1 mod 4 squarefree, or D = 4*s*m with s*m = 2, 3 mod 4 squarefree
        odd = m[sf & ((sign * m) % 4 == 1)]
        odd = odd[odd > 1] if sign == 1 else odd
        m4 = np.arange(bound // 4 + 1, dtype=np.int64)
        even = 4 * m4[sf[: bound // 4 + 1] & (((sign * m4) % 4 == 2) | ((sign * m4) % 4 == 3))]
        out.append(sign * np.concatenate([odd, even]))
    D = np.concatenate(out)
    order = np.lexsort((D, np.abs(D)))
    return D[order]


def _split_mask(D, p, ramified=True):
    """Boolean mask of discriminants in which p splits (or ramifies, when asked)."""
    if p == 2:
        return (D % 8 != 5) & ((D % 2 == 1) | ramified)
    qr = np.zeros(p, dtype=bool)
    qr[(np.arange(1, p) ** 2) % p] = True
    qr[0] = ramified
    return qr[D % p]


def vertical_report(ell, disc_bound, real_only=False, ramified=True):
    """A prime of N(ell) that splits or ramifies in K has f = 1 and splits in K(sqrt(-ell)),
    so either way it excludes K; ramified=False keeps only the split obstruction."""
    ns = n_set(ell)
    D = fundamental_discriminants(disc_bound, real_only)
    alive = np.ones(len(D), dtype=bool)
    witness = np.zeros(len(D), dtype=np.int64)
    for p in ns:
        hit = alive & _split_mask(D, p, ramified)
        witness[hit] = p
        alive &= ~hit
    survivors = tuple(int(d) for d in D[alive])
    wit = {int(d): int(w) for d, w in zip(D[~alive], witness[~alive])}
    return ScarcityReport(ell, tuple(ns), survivors, wit)


def vertical_sieve(ell, disc_bound, real_only=False, ramified=True):
    """Fundamental discriminants |D| <= disc_bound in which every p in N(ell) is inert."""
    return list(vertical_report(ell, disc_bound, real_only, ramified).survivors)


def split_primes(K, p_cap, p_min=2):
    return [p for p in primerange(p_min, p_cap + 1) if kronecker(K.disc, p) == 1]


def horizontal_report(K, ell_min, ell_max, p_cap):
    if ell_min < 5:
        raise ValueError("ell_min must be at least 5")
    ells = np.array(list(primerange(ell_min, ell_max + 1)), dtype=np.int64)
    alive = np.ones(len(ells), dtype=bool)
    witness = np.zeros(len(ells), dtype=np.int64)
    for p in split_primes(K, p_cap):
        if p == 2:
            res = (ells % 8 == 1) | (ells % 8 == 7)
        else:
            # reciprocity: (p/ell) = (ell/p) * (-1)^((p-1)/2 * (ell-1)/2)
            qr = np.zeros(p, dtype=bool)
            qr[(np.arange(1, p) ** 2) % p] = True
            flip = (p % 4 == 3) & (ells % 4 == 3)
            res = qr[ells % p] ^ flip
            res &= ells % p != 0
        hit = alive & res & (ells > 4 * p)
        witness[hit] = p
        alive &= ~hit
    survivors = tuple(int(x) for x in ells[alive])
    wit = {int(x): int(w) for x, w in zip(ells[~alive], witness[~alive])}
    return ScarcityReport((ell_min, ell_max), tuple(split_primes(K, p_cap)), survivors, wit)


def horizontal_sieve(K, ell_min, ell_max, p_cap):
    """Primes ell in [ell_min, ell_max] not excluded by any split p <= p_cap with 4p < ell, (p/ell) = 1."""
    return list(horizontal_report(K, ell_min, ell_max, p_cap).survivors)
