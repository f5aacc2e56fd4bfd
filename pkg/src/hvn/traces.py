"""Frobenius traces a_P of curves over quadratic fields and their images mod ell."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt

from sympy import primerange

from . import pointcount
from .ellcurve import GOOD, tate_reduce
from .finitefield import legendre
from .pointcount import CurveOverFq
from .quadfield import residue, split_prime, valuation

BLOCK = 256


class BadReductionError(ValueError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    prime: object
    a: int
    q: int
    a_mod: int = None

    def to_json(self):
        P = self.prime
        out = {"p": P.p, "e": P.e, "f": P.f, "root": P.root, "q": self.q, "a": self.a}
        if self.a_mod is not None:
            out["a_mod"] = self.a_mod
        return out


@dataclass(frozen=True)
class TraceSet:
    ell: int
    residues: tuple
    primes_used: int
    p_bound: int

    @property
    def size(self):
        return len(self.residues)

    def to_json(self):
        return {"ell": self.ell, "residues": list(self.residues), "size": self.size,
                "primes_used": self.primes_used, "p_bound": self.p_bound}


def reduced_curve(E, P):
    """E mod P on a model with good reduction at P; raises BadReductionError otherwise."""
    model = E.a
    integral = all(not c or c.denominator() % P.p for c in model)
    if not integral or valuation(E.disc, P) > 0:
        info = tate_reduce(E, P)
        if info.kind != GOOD:
            raise BadReductionError(f"{info.kind} reduction at {P!r}")
        model = info.model
    F = P.residue_field()
    return CurveOverFq(F, [residue(c, P) if c else F.zero for c in model])


def frobenius_trace(E, P, ell=None, seed=0):
    Ered = reduced_curve(E, P)
    q = P.norm
    a = q + 1 - pointcount.count(Ered, seed=seed)
    if a * a > 4 * q:
        raise AssertionError("Hasse bound violated")
    return TraceRecord(P, a, q, a % ell if ell else None)


def _block_records(E, primes, seed):
    out = []
    for p in primes:
        for P in split_prime(E.K, p):
            try:
                out.append(frobenius_trace(E, P, seed=seed))
            except BadReductionError:
                continue
    return out


def _blocks(p_bound, exclude):
    primes = [p for p in primerange(2, p_bound) if p not in exclude]
    return [primes[i:i + BLOCK] for i in range(0, len(primes), BLOCK)]


def iter_trace_records(E, p_bound, exclude=(), seed=0, threads=1):
    """Records for good primes above rational p < p_bound, in ascending order of (p, root)."""
    blocks = _blocks(p_bound, set(exclude))
    if threads <= 1 or len(blocks) <= 1:
        for b in blocks:
            yield from _block_records(E, b, seed)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_block_records, E, b, seed) for b in blocks]
        try:
            for fut in futures:
                yield from fut.result()
        finally:
            for fut in futures:
                fut.cancel()


def trace_records(E, p_bound, exclude=(), seed=0, threads=1):
    return list(iter_trace_records(E, p_bound, exclude, seed, threads))


def trace_set(E, ell, p_bound=25000, seed=0, threads=1, stop_above=None):
    """Residues a_P mod ell over good P above p < p_bound, p != ell.

    With stop_above set, the sweep ends as soon as the residue count exceeds it.
    """
    residues = set()
    used = 0
    for rec in iter_trace_records(E, p_bound, (ell,), seed, threads):
        residues.add(rec.a % ell)
        used += 1
        if stop_above is not None and len(residues) > stop_above:
            break
    return TraceSet(ell, tuple(sorted(residues)), used, p_bound)


def predicted_trace(q, p, f, ell):
    """q^((ell+1)/4) (1 + (p/ell)^f) mod ell for a curve balanced at ell."""
    if ell % 4 != 3:
        raise ValueError("ell must be 3 mod 4")
    if p == ell:
        raise ValueError("p must differ from ell")
    return pow(q, (ell + 1) // 4, ell) * (1 + legendre(p, ell) ** f) % ell


def balanced_residues(ell):
    """(2/ell) * (nonzero squares mod ell), together with 0."""
    s = legendre(2, ell)
    return tuple(sorted({0} | {s * x * x % ell for x in range(1, ell)}))


def cm_norm_identity(a, q, order_disc):
    """True iff (4q - a^2)/|D| is a nonnegative perfect square."""
    r = 4 * q - a * a
    D = abs(order_disc)
    if r < 0 or r % D:
        return False
    v2 = r // D
    return isqrt(v2) ** 2 == v2
