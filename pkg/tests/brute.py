"""Reference computations straight from the definitions, independent of the package"""

import math
from itertools import product


def units(n):
    return [x for x in range(1, n) if math.gcd(x, n) == 1]


def brute_points(d, a, n):
    found = []
    for head in product(units(n), repeat=d - 1):
        prod = 1
        for x in head:
            prod = prod * x % n
        for last in units(n):
            if prod * last % n == a % n:
                found.append((*head, last))
    return found


def brute_sumset(d, m, a, n):
    signs = [1] * m + [-1] * (d - m)
    return {sum(s * x for s, x in zip(signs, point)) % n for point in brute_points(d, a, n)}


def brute_squares(q):
    return {k * k % q for k in range(q)}


def prime_powers(limit):
    out = []
    for p in range(2, limit + 1):
        if all(p % r for r in range(2, math.isqrt(p) + 1)):
            q, t = p, 1
            while q <= limit:
                out.append((p, t))
                q, t = q * p, t + 1
    return out
