"""Small number-theory helpers used throughout the engine."""

from __future__ import annotations

import math

from sympy import isprime


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def v_adic(ell: int, n: int) -> int:
    """ell-adic valuation of a positive integer."""
    if n <= 0:
        raise ValueError("valuation of non-positive integer")
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def ell_part(ell: int, n: int) -> int:
    return ell ** v_adic(ell, n)


def next_prime_in_progression(modulus: int, start: int) -> int:
    """Smallest prime p ≡ 1 (mod modulus) with p > start."""
    if modulus <= 1:
        p = max(start + 1, 2)
        while not isprime(p):
            p += 1
        return p
    p = start + 1
    r = p % modulus
    if r != 1:
        p += (1 - r) % modulus
    while not isprime(p):
        p += modulus
    return p


def primitive_root_mod(ell: int) -> int:
    """Smallest primitive root modulo a prime ell."""
    if ell == 2:
        return 1
    factors = _prime_factors(ell - 1)
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // q, ell) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {ell}")


def element_of_order_mod(order: int, p: int) -> int:
    """An element of exact multiplicative order `order` in F_p (requires order | p-1)."""
    if (p - 1) % order != 0:
        raise ValueError(f"{order} does not divide {p}-1")
    if order == 1:
        return 1
    factors = _prime_factors(order)
    for a in range(2, p):
        x = pow(a, (p - 1) // order, p)
        if all(pow(x, order // q, p) != 1 for q in factors):
            return x
    raise ValueError(f"no element of order {order} mod {p}")


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out
