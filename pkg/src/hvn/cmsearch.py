"""Search for heavenly CM curves over quadratic fields whose j-invariant is not rational.

Pipeline: order discriminants of class number 2, Hilbert class polynomials from
the q-expansion of j, a model for each root, quadratic twists with good reduction
outside at most one prime, heavenly verdicts, and grouping into isogeny classes.
"""

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from math import gcd, isqrt

import mpmath
from sympy import factorint, isprime, primerange

from .ellcurve import CurveOverK, good_outside, quadratic_twist
from .heavenly import heavenly_trace_test, three_torsion_heavenly_sample, two_torsion_heavenly
from .quadfield import (make_field, primes_above_set, principal_generator, split_prime,
                        unit_gens, valuation)
from .traces import BadReductionError, balanced_residues, frobenius_trace, iter_trace_records

DISC_BOUND = 1000
ELL_CAP = 163
START_DPS = 30
MAX_DPS = 2000
SIG_BOUND = 400
PREFILTER = 6
THREE_P_BOUND = 2000
RATIONAL_CM_DISCS = (-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163)


@dataclass(frozen=True)
class CMOrderDisc:
    D: int
    m: int
    f: int
    h: int

    @property
    def field_disc(self):
        return self.D // (self.f * self.f)


def _check_disc(D):
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")


def reduced_forms(D):
    """Primitive reduced forms (a, b, c) of discriminant D: |b| <= a <= c, b >= 0 if |b| = a or a = c."""
    _check_disc(D)
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0) or gcd(gcd(a, b), c) > 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def class_number(D):
    return len(reduced_forms(D))


def order_disc(D):
    """Split D = f^2 * Delta_L into CMOrderDisc (m squarefree with L = Q(sqrt(-m)))."""
    _check_disc(D)
    m = _squarefree_part(-D)
    dl = -m if -m % 4 == 1 else -4 * m
    f = isqrt(D // dl)
    return CMOrderDisc(D, m, f, class_number(D))


def class_number_2_discs(bound=DISC_BOUND):
    out = []
    for n in range(3, bound + 1):
        D = -n
        if D % 4 in (0, 1) and class_number(D) == 2:
            out.append(order_disc(D))
    return out


# j via the q-expansion j = E4^3 / Delta

def j_qseries(tau, dps):
    with mpmath.workdps(dps + 10):
        tau = mpmath.mpc(tau)
        q = mpmath.exp(2j * mpmath.pi * tau)
        aq = abs(q)
        n_terms = int((dps + 10) * mpmath.log(10) / -mpmath.log(aq)) + 2
        e4 = mpmath.mpc(1)
        prod = mpmath.mpc(1)
        qn = mpmath.mpc(1)
        for n in range(1, n_terms + 1):
            qn *= q
            e4 += 240 * _sigma3(n) * qn
            prod *= (1 - qn) ** 24
        return e4 ** 3 / (q * prod)


def _sigma3(n):
    s = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            s += d ** 3
            if d * d != n:
                s += (n // d) ** 3
    return s


def _poly_from_roots(roots):
    coeffs = [mpmath.mpc(1)]
    for r in roots:
        nxt = coeffs + [mpmath.mpc(0)]
        for i in range(1, len(nxt)):
            nxt[i] -= r * coeffs[i - 1]
        coeffs = nxt
    return coeffs


def hilbert_class_poly(D, dps=START_DPS, max_dps=MAX_DPS):
    """Integer coefficients, highest degree first, of prod (x - j(tau)) over reduced forms."""
    if isinstance(D, CMOrderDisc):
        D = D.D
    forms = reduced_forms(D)
    while dps <= max_dps:
        with mpmath.workdps(dps):
            rD = mpmath.sqrt(mpmath.mpf(D))
            roots = [j_qseries((-b + rD) / (2 * a), dps) for a, b, _ in forms]
            coeffs = _poly_from_roots(roots)
            rounded = [int(mpmath.nint(mpmath.re(c))) for c in coeffs]
            gap = max(abs(c - r) for c, r in zip(coeffs, rounded))
        # the gap only means something while the coefficients fit inside the working precision
        digits = max(len(str(abs(r))) for r in rounded)
        if gap < 1e-4 and digits + 10 <= dps:
            return rounded
        dps *= 2
    raise ArithmeticError(f"precision cap {max_dps} reached for D={D}")


def _squarefree_part(n):
    s = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s


def j_roots(D):
    """(K, [roots of H_D in K]); K is None when H_D is linear."""
    H = hilbert_class_poly(D)
    if len(H) == 2:
        return None, [-H[1]]
    if len(H) != 3:
        raise ValueError("only class numbers 1 and 2 are supported")
    _, b, c = H
    disc = b * b - 4 * c
    d = _squarefree_part(disc)
    s = isqrt(disc // d)
    K = make_field(d)
    roots = [K.from_sqrt_coords(Fraction(-b, 2), Fraction(sg * s, 2)) for sg in (1, -1)]
    for r in roots:
        if r * r + r * b + c:
            raise ArithmeticError("root of H_D failed exact verification")
    return K, roots


def curve_from_j(j, K):
    """Integral model with invariant j: y^2 + u xy = x^3 - 36 u^3 x - u^5, u = j - 1728."""
    j = K(j) if not hasattr(j, "K") else j
    if not j:
        return CurveOverK(K, (0, 0, 0, 0, 1))
    if j == K(1728):
        return CurveOverK(K, (0, 0, 0, 1, 0))
    u = j - 1728
    if not j.is_integral():
        raise ValueError("j must be integral")
    E = CurveOverK(K, (u, K(0), K(0), u ** 3 * -36, -(u ** 5)))
    if E.j != j:
        raise ArithmeticError("model does not have the requested j-invariant")
    # norm(disc) = N(j)^2 N(u)^9: factor the small pieces
    E._support = sorted(set(_norm_primes(j)) | set(_norm_primes(u)))
    return E


def _norm_primes(x):
    n = abs(x.norm())
    return list(factorint(n)) if n > 1 else []


def isogeny_prime_candidates(D):
    if isinstance(D, CMOrderDisc):
        D = D.D
    f = order_disc(D).f
    return [ell for ell in primerange(2, ELL_CAP + 1)
            if _kron(D, ell) != -1 or (f * D) % ell == 0]


def _kron(D, ell):
    if ell == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % ell
    if r == 0:
        return 0
    return 1 if pow(r, (ell - 1) // 2, ell) == 1 else -1


# quadratic twists with good reduction outside at most one rational prime

def _solve_f2(rows, target, n):
    """All x in F_2^n with <rows[k], x> = target[k]; rows are int bitmasks."""
    pivots = []
    for r, t in zip(rows, target):
        for pc, pr, pt in pivots:
            if r >> pc & 1:
                r ^= pr
                t ^= pt
        if not r:
            if t:
                return []
            continue
        col = r.bit_length() - 1
        pivots = [(pc, pr ^ r, pt ^ t) if pr >> col & 1 else (pc, pr, pt) for pc, pr, pt in pivots]
        pivots.append((col, r, t))
    pivot_cols = {pc for pc, _, _ in pivots}
    free = [c for c in range(n) if c not in pivot_cols]
    out = []
    for bits in product((0, 1), repeat=len(free)):
        x = 0
        for c, b in zip(free, bits):
            if b:
                x |= 1 << c
        for pc, pr, pt in pivots:
            # pivot row: x_pc + sum over free columns = pt
            v = pt ^ (bin(pr & x & ~(1 << pc)).count("1") & 1)
            if v:
                x |= 1 << pc
        out.append(x)
    return sorted(out)


@dataclass
class TwistSpace:
    """S-units of K modulo squares for the twisting set of a base curve."""
    base: CurveOverK
    primes_rat: tuple
    gens: list
    primes: list
    parity: list  # parity[g] = bitmask over primes of v_P(gen g) mod 2

    def element(self, x):
        u = self.base.K.one()
        for i, g in enumerate(self.gens):
            if x >> i & 1:
                u = u * g
        return u


def twist_space(E, extra=()):
    """Twisting data for S~ = {2, 3} + bad primes of E + extra rational primes."""
    K = E.K
    S = tuple(sorted({2, 3} | set(E.disc_support()) | set(extra)))
    primes = primes_above_set(K, S)
    gens = list(unit_gens(K)) + [principal_generator(P)[1] for P in primes]
    parity = []
    for g in gens:
        m = 0
        for k, P in enumerate(primes):
            if valuation(g, P) % 2:
                m |= 1 << k
        parity.append(m)
    return TwistSpace(E, S, gens, primes, parity)


def _candidate_bits(space, allowed):
    """Twist classes whose reduction is good at every P above p >= 5 outside allowed."""
    E = space.base
    rows, target = [], []
    for k, P in enumerate(space.primes):
        if P.p < 5 or P.p in allowed:
            continue
        delta = valuation(E.disc, P)
        if delta % 6:
            return []
        rows.append(sum(1 << i for i, m in enumerate(space.parity) if m >> k & 1))
        target.append(delta // 6 % 2)
    return _solve_f2(rows, target, len(space.gens))


def make_twist(space, x):
    u = space.element(x)
    Et = quadratic_twist(space.base, u) if x else space.base
    Et._support = list(space.primes_rat)
    return Et


def bad_set(E):
    """Rational primes below the primes of bad reduction of E."""
    _, bad = good_outside(E, ())
    return tuple(sorted({P.p for P in bad}))


def good_twists(space, max_bad=1):
    """[(x, curve, bad rational primes)] over twist classes with at most max_bad bad primes."""
    seen = {}
    for allowed in [()] + [(p,) for p in space.primes_rat]:
        for x in _candidate_bits(space, allowed):
            if x in seen:
                continue
            Et = make_twist(space, x)
            seen[x] = (Et, bad_set(Et))
    return [(x, Et, B) for x, (Et, B) in sorted(seen.items()) if len(B) <= max_bad]


def twist_search(E, ell=None):
    """Twists of E by S~-units modulo squares with good reduction outside {ell} (or everywhere)."""
    allowed = {ell} if ell else set()
    space = twist_space(E, extra=allowed)
    return [Et for _, Et, B in good_twists(space) if set(B) <= allowed]


# heavenly verdicts for the surviving twists

def classify(E, B, D, p_bound=25000, seed=0):
    """Heavenly verdicts of a twist whose bad primes lie above B (at most one prime)."""
    if len(B) > 1:
        return []
    ells = list(B) if B else isogeny_prime_candidates(D)
    records = _RecordCache(E, p_bound, seed)
    out = []
    for ell in ells:
        if ell == 2:
            out.append(two_torsion_heavenly(E))
        elif ell == 3:
            out.append(three_torsion_heavenly_sample(E, min(p_bound, THREE_P_BOUND), seed))
        else:
            out.append(heavenly_trace_test(E, ell, p_bound, seed, check_prediction=True, records=records))
    return out


class _RecordCache:
    """Trace records of one curve, computed on demand and shared between primes ell."""

    def __init__(self, E, p_bound, seed):
        self._it = iter_trace_records(E, p_bound, (), seed)
        self._done = []

    def __iter__(self):
        i = 0
        while True:
            if i == len(self._done):
                rec = next(self._it, None)
                if rec is None:
                    return
                self._done.append(rec)
            yield self._done[i]
            i += 1


def signature_primes(K, B, bound=SIG_BOUND):
    return [P for p in primerange(5, bound) if p not in B for P in split_prime(K, p)]


def signature(E, primes):
    """Frobenius traces at the given primes; None at the first bad one."""
    out = []
    for P in primes:
        try:
            out.append(frobenius_trace(E, P).a)
        except BadReductionError:
            return None
    return tuple(out)


@dataclass
class CurveRecord:
    D: int
    j: object
    twist: int
    curve: CurveOverK
    bad: tuple
    verdicts: list
    sig: tuple = None

    @property
    def ells(self):
        return tuple(v.ell for v in self.verdicts if v.heavenly)

    def to_json(self):
        return {"D": self.D, "j": self.j.to_json(), "model": self.curve.to_json(),
                "bad_primes": list(self.bad), "verdicts": [v.to_json() for v in self.verdicts]}


def search_root(D, index, p_bound=25000, seed=0):
    """Heavenly twists of the model attached to one root of H_D."""
    K, roots = j_roots(D)
    j = roots[index]
    E = curve_from_j(j, K)
    extra = [p for p in factorint(-D)]
    space = twist_space(E, extra=extra)
    out = []
    for x, Et, B in good_twists(space):
        if Et.j != j:
            raise ArithmeticError("twist changed the j-invariant")
        verdicts = classify(Et, B, D, p_bound, seed)
        rec = CurveRecord(D, j, x, Et, B, verdicts)
        if rec.ells:
            ok, _ = good_outside(Et, B)
            if not ok:
                raise ArithmeticError("emitted curve fails good_outside")
            rec.sig = signature(Et, signature_primes(K, B))
            out.append(rec)
    return out


# curves with rational j in a class

def _power_twists(K, B, n):
    """Representatives u of the ({2, 3} + B)-units modulo n-th powers."""
    primes = primes_above_set(K, {2, 3} | set(B))
    gens = list(unit_gens(K)) + [principal_generator(P)[1] for P in primes]
    ranges = [range(2) if g == K(-1) else range(n) for g in gens]
    out = []
    for exps in product(*ranges):
        u = K.one()
        for g, e in zip(gens, exps):
            if e:
                u = u * g ** e
        out.append(u)
    return out


def rational_j_curves(K, m, B, sig, sig_primes):
    """Curves with rational j, CM by an order of Q(sqrt(-m)), matching the class signature."""
    head = sig_primes[:PREFILTER]
    out = []
    for D in RATIONAL_CM_DISCS:
        if order_disc(D).m != m:
            continue
        j0 = -hilbert_class_poly(D)[1]
        if j0 == 0:
            cands = [CurveOverK(K, (0, 0, 0, 0, u)) for u in _power_twists(K, B, 6)]
        elif j0 == 1728:
            cands = [CurveOverK(K, (0, 0, 0, u, 0)) for u in _power_twists(K, B, 4)]
        else:
            base = curve_from_j(K(j0), K)
            space = twist_space(base, extra=B)
            cands = [Et for _, Et, bad in good_twists(space) if bad == tuple(B)]
        for C in cands:
            if signature(C, head) != sig[:len(head)]:
                continue
            if signature(C, sig_primes) != sig:
                continue
            ok, _ = good_outside(C, B)
            if not ok:
                raise ArithmeticError("curve matches a class signature but has extra bad primes")
            out.append((j0, C))
    return out


# assembly into isogeny classes

@dataclass
class SearchRow:
    ell: tuple
    field_disc: int
    min_poly: str
    m: int
    f: tuple
    star: bool
    curves: list
    rational: list = field(default_factory=list)
    label: str = ""
    flags: list = field(default_factory=list)

    @property
    def r_K(self):
        return len(self.curves)

    @property
    def r_Q(self):
        return len(self.rational)

    @property
    def verdicts(self):
        return [c.verdicts for c in self.curves]

    def csv_row(self):
        return [self.label, " ".join(map(str, self.ell)), self.min_poly, self.m,
                " ".join(map(str, self.f)), self.r_K, self.r_Q, int(self.star)]

    def to_json(self):
        return {"label": self.label, "ell": list(self.ell), "field_disc": self.field_disc,
                "min_poly": self.min_poly, "m": self.m, "f": list(self.f), "star": self.star,
                "r_K": self.r_K, "r_Q": self.r_Q, "flags": self.flags,
                "curves": [c.to_json() for c in self.curves],
                "rational_j_curves": [{"j": j0, "model": C.to_json()} for j0, C in self.rational]}


CSV_HEADER = ["label", "ell", "m(T)", "m", "f", "r_K", "r_Q", "star"]


def _work_units(discs):
    return [(d.D, i) for d in discs for i in range(2)]


def _run_units(fn, args, threads):
    if threads <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *a) for a in args]
        return [fut.result() for fut in futures]


def _search_unit(D, index, p_bound, seed):
    return search_root(D, index, p_bound, seed)


def _check_row(row):
    """Structural checks on a class; failures become flags on the row."""
    ells = {c.ells for c in row.curves}
    if len(ells) > 1:
        row.flags.append("curves in the class disagree on heavenly primes")
    for c in row.curves:
        for v in c.verdicts:
            if not v.heavenly or v.ell <= 3:
                continue
            ev = v.evidence
            allowed = set(balanced_residues(v.ell))
            if not set(ev["residues"]) <= allowed:
                row.flags.append(f"trace residues outside the balanced set at {v.ell}")
            if ev.get("prediction_mismatches"):
                row.flags.append(f"{ev['prediction_mismatches']} traces differ from the balanced prediction at {v.ell}")
    for ell in row.ell:
        if ell > 3:
            if ell % 4 != 3:
                row.flags.append(f"heavenly prime {ell} is not 3 mod 4")
            if row.f == (1,) and not (row.m % ell == 0 and isprime(row.m // ell)):
                row.flags.append(f"m = {row.m} is not {ell} times a prime")
    row.flags = sorted(set(row.flags))


def _rational_unit(d, m, B, sig, bound):
    K = make_field(d)
    sp = signature_primes(K, B, bound)
    return rational_j_curves(K, m, B, sig, sp)


def assemble(records):
    """Group heavenly curves into classes keyed by (field, bad primes, trace signature)."""
    classes = {}
    for rec in records:
        K = rec.curve.K
        key = (K.d, rec.bad, rec.sig)
        classes.setdefault(key, []).append(rec)
    rows = []
    for (d, B, sig), recs in classes.items():
        K = recs[0].curve.K
        ods = {order_disc(r.D) for r in recs}
        ells = tuple(sorted(set().union(*(set(r.ells) for r in recs))))
        row = SearchRow(ells, K.disc, K.min_poly_str(), min(o.m for o in ods),
                        tuple(sorted({o.f for o in ods})), not B,
                        sorted(recs, key=lambda r: (r.D, str(r.j.to_json()), r.twist)))
        if len({o.m for o in ods}) > 1:
            row.flags.append("curves in the class have different CM fields")
        rows.append(row)
    rows.sort(key=lambda r: (_ell_label(r.ell), r.field_disc, r.star, -r.m, r.f, r.curves[0].sig))
    counter = {}
    for row in rows:
        prefix = f"{_ell_label(row.ell)}.{row.field_disc}"
        counter[prefix] = counter.get(prefix, 0) + 1
        row.label = ("*" if row.star else "") + f"{prefix}.{counter[prefix]}"
    return rows


def _ell_label(ells):
    n = 1
    for ell in ells:
        n *= ell
    return n


def run_search(p_bound=25000, seed=0, threads=1, discs=None, sig_bound=SIG_BOUND):
    """Full pipeline; rows come back in (ell, field discriminant, class) order."""
    discs = class_number_2_discs() if discs is None else discs
    units = [(D, i, p_bound, seed) for D, i in _work_units(discs)]
    records = [r for chunk in _run_units(_search_unit, units, threads) for r in chunk]
    rows = assemble(records)
    args = [(row.curves[0].curve.K.d, row.m, row.curves[0].bad, row.curves[0].sig, sig_bound)
            for row in rows]
    for row, rat in zip(rows, _run_units(_rational_unit, args, threads)):
        row.rational = rat
        _check_row(row)
    return rows


# comparison with reference class data

def load_reference():
    text = resources.files("hvn").joinpath("data/reference_classes.csv").read_text()
    return list(csv.DictReader(text.splitlines()))


def _disc_of_poly(s):
    if s.startswith("T^2 - T - "):
        return 1 + 4 * int(s.split()[-1])
    d = int(s.split()[-1])
    return d if d % 4 == 1 else 4 * d


def _ref_count(first, last):
    return int(last.split(".")[-1]) - int(first.split(".")[-1]) + 1


def compare_with_reference(rows, reference=None):
    """Per reference row: found class count and (r_K, r_Q) pairs, with a match flag."""
    reference = load_reference() if reference is None else reference
    found = {}
    for row in rows:
        key = (row.ell, row.field_disc, row.m, row.f, row.star)
        found.setdefault(key, []).append((row.r_K, row.r_Q))
    out = []
    used = set()
    for ref in reference:
        ell = tuple(int(x) for x in ref["ell"].split())
        key = (ell, _disc_of_poly(ref["min_poly"]), int(ref["m"]),
               tuple(int(x) for x in ref["f"].split()), ref["first"].startswith("*"))
        n = _ref_count(ref["first"], ref["last"])
        want = (int(ref["r_K"]), int(ref["r_Q"]))
        got = found.get(key, [])
        used.add(key)
        label = ref["first"] if n == 1 else f"{ref['first']}-{ref['last']}"
        out.append({"reference": label, "expected_classes": n, "expected": list(want),
                    "found_classes": len(got), "found": [list(g) for g in got],
                    "match": len(got) == n and all(g == want for g in got)})
    for key, got in sorted(found.items()):
        if key not in used:
            out.append({"reference": None, "key": [list(key[0]), key[1], key[2], list(key[3]), key[4]],
                        "expected_classes": 0, "found_classes": len(got),
                        "found": [list(g) for g in got], "match": False})
    return out


def totals(rows):
    return {"classes": len(rows), "r_K": sum(r.r_K for r in rows), "r_Q": sum(r.r_Q for r in rows)}
