"""Quadratic fields K = Q(sqrt d), their integers, primes, units and S-units.

Elements are x + y*w in the basis (1, w) with w = sqrt(d) (SqrtBasis) or
w = (1 + sqrt(d))/2 (HalfBasis, used iff d = 1 mod 4).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product
from math import gcd, isqrt

from sympy import factorint, isprime

from .finitefield import GF

SQRT_BASIS = "SqrtBasis"
HALF_BASIS = "HalfBasis"


def is_squarefree(n):
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def kronecker(a, n):
    """Kronecker symbol (a | n) for n > 0."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _vp(n, p):
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _as_int(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


class QuadField:
    def __init__(self, d):
        d = int(d)
        if d in (0, 1) or not is_squarefree(d):
            raise ValueError(f"d={d} must be squarefree and not 0 or 1")
        self.d = d
        if d % 4 == 1:
            self.disc = d
            self.basis_kind = HALF_BASIS
            self.c = (d - 1) // 4
        else:
            self.disc = 4 * d
            self.basis_kind = SQRT_BASIS
            self.c = d
        self._unit = None

    @property
    def half(self):
        return self.basis_kind == HALF_BASIS

    def __repr__(self):
        return f"QuadField({self.d})"

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self):
        return hash(("QuadField", self.d))

    def min_poly(self):
        """Coefficients (b, c) of m(T) = T^2 + bT + c for w."""
        return (-1, -self.c) if self.half else (0, -self.d)

    def min_poly_str(self):
        return f"T^2 - T - {self.c}" if self.half else f"T^2 - {self.d}"

    def __call__(self, x, y=0):
        return FieldElem(self, x, y)

    def zero(self):
        return FieldElem(self, 0, 0)

    def one(self):
        return FieldElem(self, 1, 0)

    def omega(self):
        return FieldElem(self, 0, 1)

    def sqrt_d(self):
        return FieldElem(self, -1, 2) if self.half else FieldElem(self, 0, 1)

    def from_sqrt_coords(self, a, b):
        """The element a + b*sqrt(d)."""
        a, b = Fraction(a), Fraction(b)
        if self.half:
            return FieldElem(self, _as_int(a - b), _as_int(2 * b))
        return FieldElem(self, _as_int(a), _as_int(b))

    def embeddings(self, prec=None):
        """The two images of w as mpmath numbers (real or complex)."""
        import mpmath
        ctx = mpmath.mp.clone()
        if prec is not None:
            ctx.dps = prec
        s = ctx.sqrt(self.d) if self.d > 0 else ctx.mpc(0, ctx.sqrt(-self.d))
        if self.half:
            return ((1 + s) / 2, (1 - s) / 2), ctx
        return (s, -s), ctx


class FieldElem:
    __slots__ = ("K", "x", "y")

    def __init__(self, K, x, y=0):
        self.K = K
        self.x = _as_int(x) if isinstance(x, Fraction) else int(x)
        self.y = _as_int(y) if isinstance(y, Fraction) else int(y)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.K != self.K:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.K, other, 0)
        return NotImplemented

    def __repr__(self):
        return f"({self.x})+({self.y})w[d={self.K.d}]"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.K == other.K and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.K.d, self.x, self.y))

    def __bool__(self):
        return self.x != 0 or self.y != 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.K, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.K, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.K, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.K, self.x * other, self.y * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        K = self.K
        x1, y1, x2, y2 = self.x, self.y, o.x, o.y
        u = y1 * y2
        if K.half:
            return FieldElem(K, x1 * x2 + K.c * u, x1 * y2 + x2 * y1 + u)
        return FieldElem(K, x1 * x2 + K.d * u, x1 * y2 + x2 * y1)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r, b = self.K.one(), self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def conj(self):
        if self.K.half:
            return FieldElem(self.K, self.x + self.y, -self.y)
        return FieldElem(self.K, self.x, -self.y)

    def norm(self):
        K = self.K
        if K.half:
            return _as_int(self.x * self.x + self.x * self.y - K.c * self.y * self.y)
        return _as_int(self.x * self.x - K.d * self.y * self.y)

    def trace(self):
        return _as_int(2 * self.x + self.y) if self.K.half else _as_int(2 * self.x)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return FieldElem(self.K, Fraction(c.x) / n, Fraction(c.y) / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.K, Fraction(self.x) / other, Fraction(self.y) / other)
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def is_integral(self):
        return isinstance(self.x, int) and isinstance(self.y, int)

    def is_rational(self):
        return self.y == 0

    def denominator(self):
        dx = self.x.denominator if isinstance(self.x, Fraction) else 1
        dy = self.y.denominator if isinstance(self.y, Fraction) else 1
        return dx * dy // gcd(dx, dy)

    def content(self):
        """gcd of the integer coordinates."""
        return gcd(self.x, self.y)

    def sqrt_coords(self):
        """(a, b) with self = a + b sqrt(d)."""
        if self.K.half:
            return (Fraction(self.x) + Fraction(self.y, 2), Fraction(self.y, 2))
        return (Fraction(self.x), Fraction(self.y))

    def to_json(self):
        # non-integral coordinates serialize as "n/d" strings
        return [int(c) if Fraction(c).denominator == 1 else str(Fraction(c)) for c in (self.x, self.y)]

    def embed(self, prec=None):
        (w1, w2), ctx = self.K.embeddings(prec)
        return self.x + self.y * w1, self.x + self.y * w2

    def sqrt(self):
        """A square root in K, or None."""
        a, b = self.sqrt_coords()
        d = self.K.d
        n = a * a - d * b * b
        if n < 0:
            return None
        rn = _qsqrt(n)
        if rn is None:
            return None
        for cand in ((a + rn) / 2, (a - rn) / 2):
            u = _qsqrt(cand)
            if u is None:
                continue
            if u != 0:
                v = b / (2 * u)
            else:
                v2 = a / d
                v = _qsqrt(v2) if v2 >= 0 else None
                if v is None:
                    continue
            r = self.K.from_sqrt_coords(u, v)
            if r * r == self:
                return r
        return None

    def is_square(self):
        return self.sqrt() is not None


def _qsqrt(r):
    """Exact square root of a nonnegative rational, or None."""
    r = Fraction(r)
    if r < 0:
        return None
    n, m = isqrt(r.numerator), isqrt(r.denominator)
    if n * n == r.numerator and m * m == r.denominator:
        return Fraction(n, m)
    return None


def make_field(d):
    return QuadField(d)


# primes of K

@dataclass(frozen=True)
class PrimeOfK:
    K: QuadField
    p: int
    e: int
    f: int
    root: object  # int root of m(T) mod p, None when inert
    index: int = 0
    _lam: object = field(default=None, compare=False, repr=False)

    @property
    def norm(self):
        return self.p ** self.f

    def residue_field(self):
        return GF(self.p, self.f)

    def label(self):
        return f"{self.p}.{self.index}" if self.e * self.f == 1 else f"{self.p}"

    def __repr__(self):
        kind = {(1, 1): "split", (1, 2): "inert", (2, 1): "ramified"}[(self.e, self.f)]
        return f"Prime(p={self.p}, {kind}, root={self.root}, N={self.norm})"


def _mroots(K, p):
    b, c = K.min_poly()
    return [r for r in range(p) if (r * r + b * r + c) % p == 0]


def split_prime(K, p):
    """Primes of K above the rational prime p, as PrimeOfK records."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker(K.disc, p)
    roots = _mroots(K, p)
    if k == 0:
        P = PrimeOfK(K, p, 2, 1, roots[0])
        return [_with_lambda(P)]
    if k == -1:
        return [_with_lambda(PrimeOfK(K, p, 1, 2, None))]
    return [_with_lambda(PrimeOfK(K, p, 1, 1, r, i)) for i, r in enumerate(sorted(roots))]


def _with_lambda(P):
    """Attach lam with lam*P inside pO_K and v_P(lam) = e - 1."""
    K = P.K
    if P.f == 2:
        lam = K.one()
    elif P.e == 1:
        other = [r for r in _mroots(K, P.p) if r != P.root]
        lam = K.omega() - other[0]
    else:
        lam = _find_uniformizer(P)
    object.__setattr__(P, "_lam", lam)
    return P


def _find_uniformizer(P):
    w = P.K.omega()
    for cand in (w - P.root, w - P.root - P.p):
        if valuation(cand, P) == 1:
            return cand
    raise RuntimeError("no uniformizer found")


def uniformizer(P):
    """An integral element with P-adic valuation 1."""
    if P.f == 2:
        return P.K(P.p)
    return _find_uniformizer(P)


def primes_above_set(K, S):
    out = []
    for p in sorted(S):
        out.extend(split_prime(K, p))
    return out


def valuation(x, P):
    """P-adic valuation of a nonzero element; raises on zero."""
    if not x:
        raise ValueError("valuation of zero is infinite")
    den = x.denominator()
    if den != 1:
        x = x * den
    g = gcd(x.x, x.y)
    vg = _vp(g, P.p) if g % P.p == 0 else 0
    if vg:
        x = FieldElem(P.K, x.x // P.p ** vg, x.y // P.p ** vg)
    v = P.e * vg
    if P.f == 1:
        n = x.norm()
        if n % P.p == 0:
            if P.e == 2:
                v += 1
            elif (x.x + x.y * P.root) % P.p == 0:
                v += _vp(n, P.p)
    if den != 1:
        v -= P.e * _vp(den, P.p) if den % P.p == 0 else 0
    return v


@lru_cache(maxsize=4096)
def _omega_image(P):
    F = P.residue_field()
    if P.f == 1:
        return F, P.root % P.p
    b, c = P.K.min_poly()
    r = F.roots_quadratic(F(b), F(c))
    return F, min(r, key=lambda t: (t[1], t[0]))


def residue(x, P):
    """Image of x in O_K/P as an element of F_p or the canonical F_{p^2}."""
    F, rho = _omega_image(P)
    den = x.denominator()
    if den % P.p == 0:
        raise ValueError("denominator divisible by p; clear it first")
    if den != 1:
        return F.div(_reduce_int(x * den, F, rho), F(den))
    return _reduce_int(x, F, rho)


def _reduce_int(x, F, rho):
    return F.add(F(x.x), F.mul(F(x.y), rho))


def lift(r, P):
    """An integral element whose residue at P is r."""
    F, rho = _omega_image(P)
    p = P.p
    if P.f == 1:
        return P.K(int(r) % p)
    # rho = r0 + r1 t, so t = (w - r0)/r1
    r0, r1 = rho
    r1i = pow(r1, -1, p)
    c0, c1 = r
    return P.K((c0 - c1 * r1i * r0) % p, c1 * r1i % p)


def reduce_mod(x, P):
    """Canonical small representative of x modulo P."""
    return lift(residue(x, P), P)


# units

def fundamental_unit(K):
    """Fundamental unit > 1 of a real quadratic field, via the continued fraction of w."""
    if K.d < 0:
        raise ValueError("imaginary field has no fundamental unit")
    if K._unit is None:
        K._unit = _unit_by_cf(K)
    return K._unit


def _unit_by_cf(K):
    # w = (P + sqrt D)/Q; convergents h/k of w make h - k*w small with small norm
    D = K.d
    P, Q = (1, 2) if K.half else (0, 1)
    r = isqrt(D)
    hm2, hm1, km2, km1 = 0, 1, 1, 0
    w = K.omega()
    for _ in range(100000):
        a = (P + r) // Q
        hm2, hm1 = hm1, a * hm1 + hm2
        km2, km1 = km1, a * km1 + km2
        u = K(hm1) - w * km1
        if abs(u.norm()) == 1:
            return _normalize_unit(u)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("fundamental unit search failed")


def real_value(x):
    a, b = x.sqrt_coords()
    import mpmath
    return mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(x.K.d)


def _normalize_unit(u):
    """The element of {+-u, +-1/u} that exceeds 1 under the real embedding."""
    for c in (u, -u, u.inverse(), -u.inverse()):
        if real_value(c) > 1:
            return c
    raise RuntimeError("unit normalization failed")


def unit_gens(K):
    """Generators of O_K^* : torsion generator first, then the fundamental unit."""
    if K.d > 0:
        return [K(-1), fundamental_unit(K)]
    if K.d == -1:
        return [K.omega()]
    if K.d == -3:
        return [K(0, 1) - K(1)]  # w - 1 = (-1 + sqrt(-3))/2 has order 3; -(w-1) has order 6
    return [K(-1)]


def elements_of_norm(K, n):
    """Integral x + y w with |N| = n, up to units (a bounded fundamental domain)."""
    out = []
    if K.d < 0:
        ymax = isqrt(4 * n // abs(K.d)) + 1
        signs = (1,)
    else:
        eps = real_value(fundamental_unit(K))
        ymax = int(2 * (n * eps) ** 0.5 / K.d ** 0.5) + 2
        signs = (1, -1)
    for y in range(-ymax, ymax + 1):
        for s in signs:
            # half: (2x + y)^2 = d y^2 + 4 s n ; sqrt: x^2 = d y^2 + s n
            if K.half:
                t = K.d * y * y + 4 * s * n
                if t < 0:
                    continue
                r = isqrt(t)
                if r * r != t:
                    continue
                for z in {r, -r}:
                    if (z - y) % 2 == 0:
                        out.append(K((z - y) // 2, y))
            else:
                t = K.d * y * y + s * n
                if t < 0:
                    continue
                r = isqrt(t)
                if r * r == t:
                    for z in {r, -r}:
                        out.append(K(z, y))
    return out


def _size_key(g):
    s1, s2 = g.embed(20)
    return (round(float(abs(s1) + abs(s2)), 6), g.x < 0, abs(g.x), abs(g.y), g.y < 0)


def principal_generator(P, kmax=6):
    """(k, g) with (g) = P^k for the least k <= kmax; fails loudly beyond kmax."""
    for k in range(1, kmax + 1):
        n = P.norm ** k
        gens = [g for g in elements_of_norm(P.K, n) if valuation(g, P) == k]
        if gens:
            return k, min(gens, key=_size_key)
    raise RuntimeError(f"no principal power of {P} up to exponent {kmax}")


def s_unit_square_classes(K, S):
    """Representatives of the S-units modulo squares, as subset products."""
    gens = s_unit_gens(K, S)
    out = []
    for bits in product((0, 1), repeat=len(gens)):
        u = K.one()
        for b, g in zip(bits, gens):
            if b:
                u = u * g
        out.append(u)
    return out


def s_unit_gens(K, S):
    gens = list(unit_gens(K))
    for P in primes_above_set(K, S):
        gens.append(principal_generator(P)[1])
    return gens
