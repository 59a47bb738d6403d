"""Exact integer arithmetic: factoring, symbols, square roots and Hensel lifting."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the fixed bases are exact below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes(start: int = 2, stop: int | None = None) -> Iterator[int]:
    n = max(start, 2)
    while stop is None or n < stop:
        if is_prime(n):
            yield n
        n += 1


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 200):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")


def factor(n: int) -> dict[int, int]:
    """Factor a nonzero integer; the sign is dropped, keys come out sorted."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            d = _pollard_rho(m)
            stack.extend((d, m // d))
    return dict(sorted(out.items()))


def vp(n: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = Fraction(n)
    v = 0
    a, b = n.numerator, n.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factor(n).values())


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    if is_square(a) and is_square(b):
        return Fraction(math.isqrt(a), math.isqrt(b))
    return None


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        raise ValueError("kronecker symbol needs n != 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
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


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of a modulo an odd prime p (Tonelli-Shanks).

    Returns the root in [0, (p-1)/2], or None when a is a non-residue.
    """
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def poly_eval(coeffs: Sequence[int], x: int, mod: int | None = None) -> int:
    """Evaluate sum(coeffs[k] * x**k)."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
        if mod is not None:
            acc %= mod
    return acc


def poly_deriv(coeffs: Sequence[int]) -> list[int]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def hensel_lift(coeffs: Sequence[int], r: int, p: int, N: int) -> int:
    """Lift a simple root r of f mod p to the unique root mod p**N.

    ``coeffs`` lists the coefficients of f from the constant term up.
    """
    if poly_eval(coeffs, r, p) != 0:
        raise ValueError("seed is not a root mod p")
    df = poly_deriv(coeffs)
    if poly_eval(df, r, p) == 0:
        raise ValueError("singular root: f'(r) = 0 mod p")
    mod = p
    x = r % p
    while mod < p**N:
        mod = min(mod * mod, p**N)
        x = (x - poly_eval(coeffs, x, mod) * pow(poly_eval(df, x, mod), -1, mod)) % mod
    return x % p**N


def sqrt_mod_prime_power(a: int, p: int, N: int) -> int | None:
    """Square root of a unit a modulo p**N for odd p."""
    r = sqrt_mod(a, p)
    if r is None or a % p == 0:
        return None
    return hensel_lift([-a, 0, 1], r, p, N)


def legendre_fraction(x: Fraction, p: int) -> int:
    """Legendre symbol of a p-unit rational."""
    x = Fraction(x)
    return kronecker(x.numerator, p) * kronecker(x.denominator, p)


def mod_fraction(x: Fraction, m: int) -> int:
    """Reduce a rational whose denominator is prime to m."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, m) % m
