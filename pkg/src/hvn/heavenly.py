"""Heavenly verdicts at ell = 2, ell = 3 and ell > 3.

A curve is heavenly at ell iff it has good reduction outside ell and
[K(E[ell]) : K(mu_ell)] is a power of ell.
"""

from dataclasses import dataclass, field
from math import log10

import mpmath
from sympy import primerange

from .ellcurve import b_invariants, good_outside
from .quadfield import FieldElem, split_prime
from .traces import BadReductionError, frobenius_trace, iter_trace_records, predicted_trace

NOT_HEAVENLY = "NotHeavenly"
LIKELY = "LikelyHeavenly"
PROVEN = "ProvenHeavenly"


@dataclass(frozen=True)
class HeavenlyVerdict:
    ell: int
    status: str
    reason: str = ""
    evidence: dict = field(default_factory=dict)

    @property
    def heavenly(self):
        return self.status != NOT_HEAVENLY

    def to_json(self):
        return {"ell": self.ell, "status": self.status, "reason": self.reason,
                "evidence": self.evidence}


def _bad_verdict(ell, bad):
    P = bad[0]
    return HeavenlyVerdict(ell, NOT_HEAVENLY, "bad reduction outside ell",
                           {"prime": [P.p, P.e, P.f, P.root]})


def heavenly_trace_test(E, ell, p_bound=25000, seed=0, threads=1, check_prediction=False, records=None):
    """One-sided test for ell > 3: more than (ell+1)/2 trace residues rules heavenly out.

    With check_prediction, surviving curves also have every sampled a_P compared with
    the balanced prediction (ell = 3 mod 4 only); the mismatch count goes in the evidence.
    records, if given, replaces the trace sweep (an iterable of TraceRecord for E
    in ascending order, p < p_bound).
    """
    if ell <= 3:
        raise ValueError("trace test needs ell > 3")
    ok, bad = good_outside(E, {ell})
    if not ok:
        return _bad_verdict(ell, bad)
    half = (ell + 1) // 2
    predict = check_prediction and ell % 4 == 3
    residues, used, miss = set(), 0, 0
    if records is None:
        records = iter_trace_records(E, p_bound, (ell,), seed, threads)
    for rec in records:
        if rec.prime.p == ell:
            continue
        residues.add(rec.a % ell)
        used += 1
        # ramified primes carry no prediction
        if predict and rec.prime.e == 1 and (rec.a - predicted_trace(rec.q, rec.prime.p, rec.prime.f, ell)) % ell:
            miss += 1
        if len(residues) > half:
            break
    ev = {"size": len(residues), "residues": sorted(residues), "primes_used": used}
    if len(residues) > half:
        return HeavenlyVerdict(ell, NOT_HEAVENLY, "trace set larger than (ell+1)/2", ev)
    if predict:
        ev["prediction_mismatches"] = miss
    return HeavenlyVerdict(ell, LIKELY, "trace set is a proper subset", ev)


def chi_power_split(a, q, ell):
    """Some i has a = q^i + q^(1-i) (mod ell)."""
    n = ell - 1
    a %= ell
    return any((pow(q, i, ell) + pow(q, (1 - i) % n, ell)) % ell == a for i in range(n))


# ell = 2

def division_cubic(E):
    """Monic X^3 + b2 X^2 + 8 b4 X + 16 b6, whose roots are 4x over the 2-torsion points."""
    b2, b4, b6, _ = b_invariants(*E.a)
    return [b2, b4 * 8, b6 * 16]


def roots_in_K(K, coeffs):
    """Roots in O_K of the monic polynomial X^n + c_{n-1} X^{n-1} + ... + c_0 (coeffs high to low)."""
    size = max([1] + [abs(c.x) + abs(c.y) for c in coeffs])
    dps = 30 + 2 * int(log10(size) + 1)
    (w1, w2), _ = K.embeddings(dps)
    with mpmath.workdps(dps):
        polys = []
        for w in ((w1, w2) if K.d > 0 else (w1,)):
            polys.append([1] + [c.x + c.y * w for c in coeffs])
        rts = [mpmath.polyroots(pl, maxsteps=200, extraprec=2 * dps) for pl in polys]
        cands = set()
        if K.d > 0:
            for r1 in rts[0]:
                for r2 in rts[1]:
                    if abs(mpmath.im(r1)) > 1e-6 or abs(mpmath.im(r2)) > 1e-6:
                        continue
                    y = (mpmath.re(r1) - mpmath.re(r2)) / (w1 - w2)
                    x = mpmath.re(r1) - y * w1
                    cands.add((int(mpmath.nint(x)), int(mpmath.nint(y))))
        else:
            for r in rts[0]:
                y = mpmath.im(r) / mpmath.im(w1)
                x = mpmath.re(r) - y * mpmath.re(w1)
                cands.add((int(mpmath.nint(x)), int(mpmath.nint(y))))
    out = []
    for x, y in sorted(cands):
        z = FieldElem(K, x, y)
        v = K.one()
        for c in coeffs:
            v = v * z + c
        if not v:
            out.append(z)
    return out


def two_division_degree(E):
    """Degree over K of the splitting field of the 2-division cubic."""
    K = E.K
    b, c, d = division_cubic(E)
    roots = roots_in_K(K, [b, c, d])
    if roots:
        r = roots[0]
        # X^3 + bX^2 + cX + d = (X - r)(X^2 + (b + r)X + (c + r(b + r)))
        s = b + r
        t = c + r * s
        disc = s * s - t * 4
        return 1 if disc.is_square() else 2
    disc = b * b * c * c - c * c * c * 4 - b * b * b * d * 4 - d * d * 27 + b * c * d * 18
    return 3 if disc.is_square() else 6


def two_torsion_heavenly(E):
    ok, bad = good_outside(E, {2})
    if not ok:
        return _bad_verdict(2, bad)
    deg = two_division_degree(E)
    if deg & (deg - 1):
        return HeavenlyVerdict(2, NOT_HEAVENLY, "2-division degree is not a power of 2",
                               {"degree": deg})
    return HeavenlyVerdict(2, PROVEN, "good outside 2, 2-division degree a power of 2",
                           {"degree": deg})


# ell = 3

def three_torsion_heavenly_sample(E, p_bound=2000, seed=0):
    """Every sampled Frobenius must have char poly (T - q^i)(T - q^(1-i)) mod 3, i.e. a = 1 + q."""
    ok, bad = good_outside(E, {3})
    if not ok:
        return _bad_verdict(3, bad)
    used = 0
    for p in primerange(2, p_bound):
        if p == 3:
            continue
        for P in split_prime(E.K, p):
            try:
                rec = frobenius_trace(E, P, seed=seed)
            except BadReductionError:
                continue
            used += 1
            if (rec.a - 1 - rec.q) % 3:
                return HeavenlyVerdict(3, NOT_HEAVENLY, "Frobenius char poly not split by powers of chi",
                                       {"prime": [P.p, P.e, P.f, P.root], "a": rec.a, "q": rec.q})
    return HeavenlyVerdict(3, LIKELY, "all sampled traces satisfy a = 1 + q mod 3",
                           {"primes_used": used})
