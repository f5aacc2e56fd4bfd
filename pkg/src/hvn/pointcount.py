"""Point counting over F_p and F_{p^2}.

Exhaustive counting for small q, baby-step giant-step order finding with
twist disambiguation above that.
"""

import random
from math import isqrt

import numpy as np

EXHAUSTIVE_MAX = 10 ** 4
BSGS_MIN = 229
MAX_POINTS = 40


class CurveOverFq:
    """Long Weierstrass curve with coefficients in F = GF(p, f)."""

    def __init__(self, F, coeffs):
        self.F = F
        self.a = tuple(F(c) for c in coeffs)
        a1, a2, a3, a4, a6 = self.a
        m, ad, sm = F.mul, F.add, F.smul
        self.b2 = ad(m(a1, a1), sm(4, a2))
        self.b4 = ad(sm(2, a4), m(a1, a3))
        self.b6 = ad(m(a3, a3), sm(4, a6))
        self.b8 = F.sub(ad(ad(m(m(a1, a1), a6), sm(4, m(a2, a6))), m(a2, m(a3, a3))),
                        ad(m(a1, m(a3, a4)), m(a4, a4)))
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        disc = F.add(F.neg(m(m(b2, b2), b8)), F.neg(sm(8, m(b4, m(b4, b4)))))
        disc = F.add(disc, F.neg(sm(27, m(b6, b6))))
        disc = F.add(disc, sm(9, m(b2, m(b4, b6))))
        if F.is_zero(disc):
            raise ValueError("singular curve over the finite field")
        self.disc = disc

    @property
    def q(self):
        return self.F.q

    def short(self):
        """(A, B) with y^2 = x^3 + A x + B isomorphic to this curve (p >= 5)."""
        F = self.F
        if F.p < 5:
            raise ValueError("short form needs p >= 5")
        b2, b4, b6 = self.b2, self.b4, self.b6
        c4 = F.sub(F.mul(b2, b2), F.smul(24, b4))
        c6 = F.sub(F.add(F.neg(F.mul(b2, F.mul(b2, b2))), F.smul(36, F.mul(b2, b4))), F.smul(216, b6))
        return F.smul(-27, c4), F.smul(-54, c6)


def quadratic_character(F, x):
    """Quadratic character of x in F (odd characteristic)."""
    return F.chi(x)


def hasse_ok(q, count):
    a = q + 1 - count
    return a * a <= 4 * q


def count_exhaustive(E, limit=EXHAUSTIVE_MAX):
    F = E.F
    q = F.q
    if q > limit:
        raise ValueError(f"q={q} exceeds the exhaustive threshold {limit}")
    if F.p == 2:
        return _count_enumerate(E)
    if F.f == 1:
        return _count_prime_field(E)
    return _count_quadratic_field(E)


def _count_prime_field(E):
    p = E.F.p
    x = np.arange(p, dtype=np.int64)
    b2, b4, b6 = E.b2, E.b4, E.b6
    g = ((((4 * x + b2) % p) * x + 2 * b4) % p * x + b6) % p
    sq = np.zeros(p, dtype=np.int8)
    sq[(x * x) % p] = 1
    chi = 2 * sq[g].astype(np.int64) - 1
    chi[g == 0] = 0
    return int(p + 1 + chi.sum())


def _count_quadratic_field(E):
    # completed square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6; chi is (N(g)/p)
    F = E.F
    p = F.p
    ma, mb = F.mod

    def mul(u, v):
        w = u[1] * v[1]
        return ((u[0] * v[0] - mb * w) % p, (u[0] * v[1] + u[1] * v[0] - ma * w) % p)

    c1, c0 = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    x = (c0.ravel(), c1.ravel())
    b2, b4, b6 = E.b2, E.b4, E.b6
    g = ((4 * x[0] + b2[0]) % p, (4 * x[1] + b2[1]) % p)
    g = mul(g, x)
    g = ((g[0] + 2 * b4[0]) % p, (g[1] + 2 * b4[1]) % p)
    g = mul(g, x)
    g = ((g[0] + b6[0]) % p, (g[1] + b6[1]) % p)
    n = (g[0] * g[0] - ma * g[0] * g[1] + mb * g[1] * g[1]) % p
    sq = np.zeros(p, dtype=np.int8)
    sq[(np.arange(p, dtype=np.int64) ** 2) % p] = 1
    chi = 2 * sq[n].astype(np.int64) - 1
    chi[n == 0] = 0
    return int(F.q + 1 + chi.sum())


def _count_enumerate(E):
    F = E.F
    a1, a2, a3, a4, a6 = E.a
    m, ad = F.mul, F.add
    n = 1
    elems = list(F.elements())
    for x in elems:
        rhs = ad(m(ad(m(ad(x, a2), x), a4), x), a6)
        lin = ad(m(a1, x), a3)
        for y in elems:
            if F.sub(m(y, ad(y, lin)), rhs) == F.zero:
                n += 1
    return n


# group law on y^2 = x^3 + A x + B; None is the point at infinity

class ShortCurve:
    """Affine group law with the field arithmetic inlined (elements are ints or (c0, c1) pairs)."""

    def __init__(self, F, A, B):
        self.F, self.A, self.B = F, A, B
        self.p = F.p
        if F.f == 2:
            self.ma, self.mb = F.mod
            self.add = self._add2

    def rhs(self, x):
        F = self.F
        return F.add(F.mul(F.add(F.mul(x, x), self.A), x), self.B)

    def random_point(self, rng):
        F = self.F
        while True:
            x = F.random(rng)
            y = F.sqrt(self.rhs(x))
            if y is not None:
                if rng.randrange(2):
                    y = F.neg(y)
                return (x, y)

    def neg(self, P):
        return None if P is None else (P[0], self.F.neg(P[1]))

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + self.A) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return (x3, (lam * (x1 - x3) - y1) % p)

    def _add2(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p, ma, mb = self.p, self.ma, self.mb
        (x10, x11), (y10, y11) = P
        (x20, x21), (y20, y21) = Q
        if x10 == x20 and x11 == x21:
            if (y10 + y20) % p == 0 and (y11 + y21) % p == 0:
                return None
            # num = 3 x1^2 + A, den = 2 y1
            u = x11 * x11
            s0, s1 = x10 * x10 - mb * u, 2 * x10 * x11 - ma * u
            n0, n1 = 3 * s0 + self.A[0], 3 * s1 + self.A[1]
            d0, d1 = 2 * y10, 2 * y11
        else:
            n0, n1 = y20 - y10, y21 - y11
            d0, d1 = x20 - x10, x21 - x11
        # inverse through the norm: 1/d = (d0 - a d1 - d1 t) / N(d)
        ni = pow((d0 * d0 - ma * d0 * d1 + mb * d1 * d1) % p, -1, p)
        i0, i1 = (d0 - ma * d1) * ni % p, -d1 * ni % p
        u = n1 * i1
        l0, l1 = (n0 * i0 - mb * u) % p, (n0 * i1 + n1 * i0 - ma * u) % p
        u = l1 * l1
        x30 = (l0 * l0 - mb * u - x10 - x20) % p
        x31 = (2 * l0 * l1 - ma * u - x11 - x21) % p
        e0, e1 = x10 - x30, x11 - x31
        u = l1 * e1
        return ((x30, x31), ((l0 * e0 - mb * u - y10) % p, (l0 * e1 + l1 * e0 - ma * u - y11) % p))

    def mul(self, n, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = None
        add = self.add
        while n:
            if n & 1:
                R = add(R, P)
            P = add(P, P)
            n >>= 1
        return R

    def twist(self):
        F = self.F
        g = F.nonsquare()
        g2 = F.mul(g, g)
        return ShortCurve(F, F.mul(self.A, g2), F.mul(self.B, F.mul(g2, g)))


def _bsgs_all(C, P, lo, hi, step):
    """Every N in [lo, hi] with N = 0 mod step and N*P = O."""
    first = -(-lo // step) * step
    n = (hi - first) // step + 1
    if n <= 0:
        return []
    Q = C.mul(step, P)
    m = isqrt(n) + 1
    baby = {}
    R = None
    for j in range(m):
        baby.setdefault(R, []).append(j)
        R = C.add(R, Q)
    G = R  # m*Q
    T = C.mul(first, P)
    out = []
    for i in range(-(-n // m)):
        # first*P + (i m + j) Q = O  iff  T = -jQ
        for j in baby.get(C.neg(T), ()):
            k = i * m + j
            if k < n:
                out.append(first + k * step)
        T = C.add(T, G)
    return sorted(out)


def _candidates(lo, hi, L, Lt, q):
    """N in [lo, hi] with L | N and Lt | (2q + 2 - N)."""
    out = []
    first = -(-lo // L) * L
    for N in range(first, hi + 1, L):
        if (2 * q + 2 - N) % Lt == 0:
            out.append(N)
        if len(out) > 1:
            break
    return out


def count_bsgs(E, seed=0):
    """Group order by order-finding in the Hasse interval (exhaustive below the threshold).

    The multiples of ord(P) in the interval form a progression whose step is ord(P) (or
    its lcm with what is already known); a single multiple pins the group order.
    """
    F = E.F
    q = F.q
    if q <= BSGS_MIN or F.p < 5:
        return count_exhaustive(E, limit=max(EXHAUSTIVE_MAX, q))
    A, B = E.short()
    C = ShortCurve(F, A, B)
    Ct = C.twist()
    rng = _rng(seed, F.p, F.f, A, B)
    s = isqrt(4 * q)
    lo, hi = q + 1 - s, q + 1 + s
    L, Lt = 1, 1
    for k in range(MAX_POINTS):
        # once a point leaves the order ambiguous, alternate with the twist
        on_twist = k % 2 == 1
        curve, step = (Ct, Lt) if on_twist else (C, L)
        Ns = _bsgs_all(curve, curve.random_point(rng), lo, hi, step)
        if not Ns:
            raise RuntimeError("no group order found")
        if len(Ns) == 1:
            return 2 * q + 2 - Ns[0] if on_twist else Ns[0]
        if on_twist:
            Lt = Ns[1] - Ns[0]
        else:
            L = Ns[1] - Ns[0]
        cands = _candidates(lo, hi, L, Lt, q)
        if len(cands) == 1:
            return cands[0]
    raise RuntimeError("order not determined after 40 points")


def count(E, seed=0):
    """#E(F_q): exhaustive up to the threshold, order-finding above it."""
    if E.F.q <= EXHAUSTIVE_MAX:
        return count_exhaustive(E)
    return count_bsgs(E, seed=seed)


def _rng(seed, p, f, A, B):
    # deterministic per-instance stream, independent of call order
    return random.Random(f"{seed}:{p}:{f}:{A}:{B}")
