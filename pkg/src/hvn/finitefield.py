"""Finite fields F_p and F_{p^2}.

Elements of F_p are ints in [0, p).  Elements of F_{p^2} = F_p[t]/(t^2 + a t + b)
are pairs (c0, c1) meaning c0 + c1 t.
"""

from functools import lru_cache


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def canonical_modulus(p):
    """Lexicographically least (a, b) with t^2 + a t + b irreducible over F_p."""
    for a in range(p):
        for b in range(p):
            if not any((x * x + a * x + b) % p == 0 for x in range(p)):
                return (a, b)
    raise ValueError("no irreducible quadratic")


class GF:
    """The field F_{p^f} for f in {1, 2}."""

    def __init__(self, p, f=1, modulus=None):
        if f not in (1, 2):
            raise ValueError("f must be 1 or 2")
        self.p = p
        self.f = f
        self.q = p ** f
        if f == 2:
            a, b = modulus if modulus is not None else canonical_modulus(p)
            a %= p
            b %= p
            if any((x * x + a * x + b) % p == 0 for x in range(p)):
                raise ValueError("modulus is reducible")
            self.mod = (a, b)
        else:
            self.mod = None
        self.zero = 0 if f == 1 else (0, 0)
        self.one = 1 if f == 1 else (1, 0)
        self._nonsquare = None

    def __repr__(self):
        return f"GF({self.p}^{self.f})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.f, self.mod) == (other.p, other.f, other.mod)

    def __hash__(self):
        return hash((self.p, self.f, self.mod))

    def __call__(self, v):
        p = self.p
        if self.f == 1:
            if isinstance(v, (tuple, list)):
                if len(v) != 1 and any(v[1:]):
                    raise ValueError("not an element of the prime field")
                v = v[0]
            return int(v) % p
        if isinstance(v, (tuple, list)):
            return (int(v[0]) % p, int(v[1]) % p)
        return (int(v) % p, 0)

    def gen(self):
        if self.f == 1:
            raise ValueError("prime field has no generator t")
        return (0, 1)

    # arithmetic

    def add(self, x, y):
        p = self.p
        if self.f == 1:
            return (x + y) % p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x, y):
        p = self.p
        if self.f == 1:
            return (x - y) % p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def neg(self, x):
        p = self.p
        if self.f == 1:
            return -x % p
        return (-x[0] % p, -x[1] % p)

    def mul(self, x, y):
        p = self.p
        if self.f == 1:
            return x * y % p
        a, b = self.mod
        u = x[1] * y[1]
        return ((x[0] * y[0] - b * u) % p, (x[0] * y[1] + x[1] * y[0] - a * u) % p)

    def smul(self, k, x):
        p = self.p
        if self.f == 1:
            return k * x % p
        return (k * x[0] % p, k * x[1] % p)

    def norm(self, x):
        """Norm to F_p."""
        if self.f == 1:
            return x
        a, b = self.mod
        return (x[0] * x[0] - a * x[0] * x[1] + b * x[1] * x[1]) % self.p

    def inv(self, x):
        p = self.p
        if self.f == 1:
            if x % p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, -1, p)
        n = self.norm(x)
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        ni = pow(n, -1, p)
        a = self.mod[0]
        return ((x[0] - a * x[1]) * ni % p, -x[1] * ni % p)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, n):
        if n < 0:
            x = self.inv(x)
            n = -n
        if self.f == 1:
            return pow(x, n, self.p)
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def is_zero(self, x):
        return x == self.zero

    def frobenius(self, x):
        if self.f == 1:
            return x
        return self.pow(x, self.p)

    # squares

    def chi(self, x):
        """Quadratic character; needs odd p."""
        if self.p == 2:
            raise ValueError("quadratic character needs odd characteristic")
        if self.f == 1:
            return legendre(x, self.p)
        # chi on F_{p^2} is the Legendre symbol of the norm
        return legendre(self.norm(x), self.p)

    def is_square(self, x):
        if self.p == 2 or self.is_zero(x):
            return True
        return self.chi(x) == 1

    def nonsquare(self):
        if self._nonsquare is None:
            # every element of F_p is a square in F_{p^2}
            cands = self.elements() if self.f == 1 else ((c0, 1) for c0 in range(self.p))
            for v in cands:
                if not self.is_zero(v) and self.chi(v) == -1:
                    self._nonsquare = v
                    break
        return self._nonsquare

    def sqrt(self, x):
        """A square root of x, or None."""
        if self.is_zero(x):
            return self.zero
        q = self.q
        if self.p == 2:
            return self.pow(x, q // 2)
        if self.chi(x) != 1:
            return None
        s, m = 0, q - 1
        while m % 2 == 0:
            s += 1
            m //= 2
        z = self.pow(self.nonsquare(), m)
        r = self.pow(x, (m + 1) // 2)
        t = self.pow(x, m)
        while t != self.one:
            i, t2 = 0, t
            while t2 != self.one:
                t2 = self.mul(t2, t2)
                i += 1
            b = z
            for _ in range(s - i - 1):
                b = self.mul(b, b)
            r = self.mul(r, b)
            z = self.mul(b, b)
            t = self.mul(t, z)
            s = i
        return r

    def roots_quadratic(self, b, c):
        """Roots of X^2 + bX + c (brute force in characteristic 2)."""
        if self.p == 2:
            return [x for x in self.elements()
                    if self.is_zero(self.add(self.mul(x, self.add(x, b)), c))]
        disc = self.sub(self.mul(b, b), self.smul(4, c))
        s = self.sqrt(disc)
        if s is None:
            return []
        inv2 = pow(2, -1, self.p)
        r1 = self.smul(inv2, self.sub(s, b))
        r2 = self.smul(inv2, self.sub(self.neg(s), b))
        return [r1] if r1 == r2 else [r1, r2]

    # enumeration and sampling

    def elements(self):
        p = self.p
        if self.f == 1:
            return iter(range(p))
        return ((c0, c1) for c1 in range(p) for c0 in range(p))

    def random(self, rng):
        p = self.p
        if self.f == 1:
            return rng.randrange(p)
        return (rng.randrange(p), rng.randrange(p))

    def to_json(self, x):
        return x if self.f == 1 else [x[0], x[1]]
