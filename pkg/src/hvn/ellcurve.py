"""Long Weierstrass curves over a quadratic field and Tate's algorithm."""

from dataclasses import dataclass

from sympy import factorint

from . import quadfield as qf
from .quadfield import FieldElem, PrimeOfK, split_prime, valuation

GOOD = "Good"
MULTIPLICATIVE = "Multiplicative"
ADDITIVE = "Additive"


def b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + a2 * 4
    b4 = a4 * 2 + a1 * a3
    b6 = a3 * a3 + a6 * 4
    b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(a1, a2, a3, a4, a6):
    b2, b4, b6, b8 = b_invariants(a1, a2, a3, a4, a6)
    c4 = b2 * b2 - b4 * 24
    c6 = -b2 * b2 * b2 + b2 * b4 * 36 - b6 * 216
    disc = -b2 * b2 * b8 - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9
    return c4, c6, disc


def rst_transform(a, r, s, t):
    """Coefficients after x = x' + r, y = y' + s x' + t."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + s * 2,
        a2 - s * a1 + r * 3 - s * s,
        a3 + r * a1 + t * 2,
        a4 - s * a3 + r * a2 * 2 - (t + r * s) * a1 + r * r * 3 - s * t * 2,
        a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
    )


class CurveOverK:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over K, coefficients in O_K."""

    def __init__(self, K, coeffs):
        if len(coeffs) != 5:
            raise ValueError("need five coefficients a1, a2, a3, a4, a6")
        a = tuple(c if isinstance(c, FieldElem) else K(*c) if isinstance(c, (tuple, list)) else K(c)
                  for c in coeffs)
        self.K = K
        self.a = a
        self.c4, self.c6, self.disc = c_invariants(*a)
        if not self.disc:
            raise ValueError("singular curve: discriminant is zero")
        self.j = self.c4 ** 3 / self.disc
        self._support = None

    @property
    def a_invariants(self):
        return self.a

    def __repr__(self):
        return f"CurveOverK(d={self.K.d}, a={[c.to_json() for c in self.a]})"

    def __eq__(self, other):
        return isinstance(other, CurveOverK) and self.K == other.K and self.a == other.a

    def __hash__(self):
        return hash((self.K.d, self.a))

    def to_json(self):
        return [c.to_json() for c in self.a]

    def is_integral(self):
        return all(c.is_integral() for c in self.a)

    def disc_support(self):
        """Rational primes dividing the norm of the discriminant."""
        if self._support is None:
            n = abs(self.disc.norm())
            self._support = sorted(factorint(n)) if n > 1 else []
        return self._support

    def bad_primes(self):
        out = []
        for p in self.disc_support():
            for P in split_prime(self.K, p):
                if valuation(self.disc, P) > 0:
                    out.append(P)
        return out


def invariants(E):
    """(c4, c6, disc, j)."""
    return E.c4, E.c6, E.disc, E.j


def short_model(E):
    """y^2 = x^3 - 27 c4 x - 54 c6, isomorphic to E away from 2 and 3."""
    K = E.K
    return CurveOverK(K, (K(0), K(0), K(0), E.c4 * -27, E.c6 * -54))


def quadratic_twist(E, u):
    """Twist by K(sqrt u), in the short form y^2 = x^3 - 27 c4 u^2 x - 54 c6 u^3."""
    K = E.K
    if not isinstance(u, FieldElem):
        u = K(u)
    if not u:
        raise ValueError("cannot twist by zero")
    if not u.is_integral():
        den = u.denominator()
        u = u * (den * den)
    return CurveOverK(K, (K(0), K(0), K(0), E.c4 * u * u * -27, E.c6 * u * u * u * -54))


def change_model(E, u, r, s, t):
    """Model after the standard substitution with scaling u (a_i divided by u^i)."""
    a = rst_transform(E.a, r, s, t)
    if u != 1:
        a = tuple(c / u ** i for c, i in zip(a, (1, 2, 3, 4, 6)))
    return CurveOverK(E.K, a)


@dataclass(frozen=True)
class ReductionInfo:
    prime: PrimeOfK
    kind: str
    min_disc_val: int
    model: tuple = None  # a P-minimal integral model (a1..a6)

    def to_json(self):
        return {"p": self.prime.p, "e": self.prime.e, "f": self.prime.f,
                "root": self.prime.root, "kind": self.kind,
                "min_disc_val": self.min_disc_val}


def tate_reduce(E, P):
    """Reduction type of E at P on a P-minimal model."""
    if any(c and valuation(c, P) < 0 for c in E.a):
        raise ValueError("coefficients must be integral at the prime")
    if P.p >= 5:
        return _reduce_large(E, P)
    return _tate_small(E, P)


def _reduce_large(E, P):
    c4, c6, disc = E.c4, E.c6, E.disc
    vd = valuation(disc, P)
    v4 = valuation(c4, P) if c4 else 10 ** 9
    v6 = valuation(c6, P) if c6 else 10 ** 9
    # unscale by the uniformizer while the model is visibly non-minimal
    pi = qf.uniformizer(P)
    while vd >= 12 and v4 >= 4 and v6 >= 6:
        c4 = c4 / pi ** 4
        c6 = c6 / pi ** 6
        vd -= 12
        v4 -= 4
        v6 -= 6
    K = E.K
    model = (K(0), K(0), K(0), c4 * -27, c6 * -54)
    if vd == 0:
        kind = GOOD
    elif v4 == 0:
        kind = MULTIPLICATIVE
    else:
        kind = ADDITIVE
    return ReductionInfo(P, kind, vd, model)


def _tate_small(E, P):
    """Tate's algorithm at primes above 2 and 3."""
    p = P.p
    F = P.residue_field()
    q = F.q
    K = E.K

    def val(x):
        return valuation(x, P) if x else 10 ** 9

    def red(x):
        return qf.residue(x, P)

    def lift(r):
        return qf.lift(r, P)

    def pdiv(x):
        return not x or val(x) > 0

    def pinv(x):
        return lift(F.inv(red(x)))

    def proot(x, n):
        # n-th root in the residue field (p = n, so it is the inverse Frobenius)
        r = red(x)
        return lift(F.pow(r, q // n))

    def preduce(x):
        return lift(red(x))

    pi = qf.uniformizer(P)

    def divpi(x, k=1):
        return x / pi ** k if x else x

    a = E.a
    if not (a[0] or a[1] or a[2]) and val(a[3]) >= 4 and val(a[4]) >= 6:
        # short models: strip pi^(4k), pi^(6k) at once; the loop below still finds minimality
        k = min(val(a[3]) // 4, val(a[4]) // 6)
        a = (a[0], a[1], a[2], divpi(a[3], 4 * k), divpi(a[4], 6 * k))
    while True:
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = b_invariants(*a)
        c4, c6, disc = c_invariants(*a)
        vd = val(disc)
        if vd == 0:
            return ReductionInfo(P, GOOD, 0, a)
        if p == 2:
            if pdiv(b2):
                r = proot(a4, 2)
                t = proot(((r + a2) * r + a4) * r + a6, 2)
            else:
                inv = pinv(a1)
                r = inv * a3
                t = inv * (a4 + r * r)
        else:
            if pdiv(b2):
                r = proot(-b6, 3)
            else:
                r = -pinv(b2) * b4
            t = a1 * r + a3
        r = preduce(r)
        t = preduce(t)
        a = rst_transform(a, r, K(0), t)
        a1, a2, a3, a4, a6 = a
        b2, b4, b6, b8 = b_invariants(*a)
        if not pdiv(b2):
            return ReductionInfo(P, MULTIPLICATIVE, vd, a)
        if val(a6) < 2:
            return ReductionInfo(P, ADDITIVE, vd, a)
        if val(b8) < 3:
            return ReductionInfo(P, ADDITIVE, vd, a)
        if val(b6) < 3:
            return ReductionInfo(P, ADDITIVE, vd, a)
        # make P | a1, a2 ; P^2 | a3, a4 ; P^3 | a6
        if p == 2:
            s = proot(a2, 2)
            t = pi * proot(divpi(a6, 2), 2)
        else:
            s = a1
            t = a3
        a = rst_transform(a, K(0), s, t)
        a1, a2, a3, a4, a6 = a
        b = red(divpi(a2))
        c = red(divpi(a4, 2))
        d = red(divpi(a6, 3))
        bb = F.mul(b, b)
        cc = F.mul(c, c)
        bc = F.mul(b, c)
        w = F.add(F.add(F.sub(F.smul(27, F.mul(d, d)), F.mul(bb, cc)),
                        F.smul(4, F.mul(F.mul(b, bb), d))),
                  F.sub(F.smul(4, F.mul(c, cc)), F.smul(18, F.mul(bc, d))))
        x = F.sub(F.smul(3, c), bb)
        if not F.is_zero(w):
            return ReductionInfo(P, ADDITIVE, vd, a)
        if not F.is_zero(x):
            return ReductionInfo(P, ADDITIVE, vd, a)  # I_m*
        # triple root: move it to T = 0
        if p == 2:
            r = lift(b)
        else:
            r = proot(lift(F.neg(d)), 3)
        r = pi * preduce(r)
        a = rst_transform(a, r, K(0), K(0))
        a1, a2, a3, a4, a6 = a
        a3t = red(divpi(a3, 2))
        a6t = red(divpi(a6, 4))
        if not F.is_zero(F.add(F.mul(a3t, a3t), F.smul(4, a6t))):
            return ReductionInfo(P, ADDITIVE, vd, a)  # IV*
        if p == 2:
            t = -(pi * pi) * lift(F.sqrt(a6t))
        else:
            t = (pi * pi) * lift(F.mul(F.neg(a3t), F(pow(2, -1, p))))
        a = rst_transform(a, K(0), K(0), t)
        a1, a2, a3, a4, a6 = a
        if val(a4) < 4:
            return ReductionInfo(P, ADDITIVE, vd, a)  # III*
        if val(a6) < 6:
            return ReductionInfo(P, ADDITIVE, vd, a)  # II*
        # non-minimal: scale by the uniformizer and restart
        a = (divpi(a1, 1), divpi(a2, 2), divpi(a3, 3), divpi(a4, 4), divpi(a6, 6))


def good_outside(E, S):
    """(True, []) iff E has good reduction at every prime not above S; else the offending primes."""
    S = set(S)
    bad = []
    for p in E.disc_support():
        if p in S:
            continue
        for P in split_prime(E.K, p):
            if valuation(E.disc, P) == 0:
                continue
            info = tate_reduce(E, P)
            if info.kind != GOOD:
                bad.append(P)
    return (not bad), bad


def reduction_table(E):
    rows = []
    for p in sorted(set(E.disc_support()) | {2, 3}):
        for P in split_prime(E.K, p):
            rows.append(tate_reduce(E, P))
    return rows
