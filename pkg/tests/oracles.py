"""Independent reference computations shared by the unit, property and acceptance tests."""

from fractions import Fraction
from math import gcd, isqrt, lcm

from sympy import factorint, totient

from hvn.quadfield import kronecker


def class_number_oracle(D):
    """Dirichlet's finite sum for the maximal order, then the order index formula."""
    m = 1
    for p, e in factorint(-D).items():
        m *= p ** (e % 2)
    dl = -m if -m % 4 == 1 else -4 * m
    f = isqrt(D // dl)
    n = -dl
    s = -sum(kronecker(dl, a) * a for a in range(1, n))
    w = {3: 6, 4: 4}.get(n, 2)
    h = Fraction(w * s, 2 * n) * f
    for p in factorint(f):
        h *= 1 - Fraction(kronecker(dl, p), p)
    wf = w if f == 1 else 2
    return int(h * wf / w)


def brute_forms(D):
    """Primitive reduced forms by a scan over every a up to |D|."""
    out = set()
    for a in range(1, -D + 1):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or ((abs(b) == a or a == c) and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.add((a, b, c))
    return out


def e_tilde_oracle(g):
    """Largest lcm over multisets of d with sum phi(d) = 2g, by plain recursion."""
    ds = [d for d in range(1, 200) if totient(d) <= 2 * g]
    best = 1

    def rec(i, left, L):
        nonlocal best
        if left == 0:
            best = max(best, L)
            return
        for k in range(i, len(ds)):
            ph = int(totient(ds[k]))
            if ph <= left:
                rec(k, left - ph, lcm(L, ds[k]))

    rec(0, 2 * g, 1)
    return best


def brute_count(p, coeffs):
    """#E(F_p) by testing every (x, y)."""
    a1, a2, a3, a4, a6 = coeffs
    n = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % p == 0:
                n += 1
    return n
