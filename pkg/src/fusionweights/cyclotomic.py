"""Exact arithmetic in Z[zeta_m].

Character values are stored as integer coordinate vectors of length m in the
root-of-unity spanning set (1, zeta, ..., zeta^{m-1}): coordinate j counts
the eigenvalue zeta^j.  That representation is not unique, so equality and
zero-tests go through reduction modulo the m-th cyclotomic polynomial, which
gives canonical coordinates in the power basis (1, zeta, ..., zeta^{phi(m)-1}).
"""

from __future__ import annotations

import threading

import numpy as np
from sympy import cyclotomic_poly, symbols

_CTX_CACHE: dict = {}
_CTX_LOCK = threading.Lock()


class CyclotomicContext:
    """Reduction data for Z[zeta_m]: Phi_m and the x^j mod Phi_m table."""

    def __init__(self, m: int):
        self.m = m
        x = symbols("x")
        poly = cyclotomic_poly(m, x) if m > 1 else x - 1
        coeffs = [int(c) for c in reversed(poly.as_poly(x).all_coeffs())]
        self.phi_coeffs = coeffs            # ascending, monic of degree phi(m)
        self.degree = len(coeffs) - 1
        rows = []
        # x^j mod Phi_m, computed by the shift-and-reduce recurrence
        cur = [0] * self.degree
        if self.degree > 0:
            cur[0] = 1
        rows.append(list(cur))
        for _ in range(1, m):
            nxt = [0] + cur[:-1] if self.degree > 1 else [0]
            if self.degree >= 1:
                lead = cur[-1]
                if lead:
                    for i in range(self.degree):
                        nxt[i] -= lead * coeffs[i]
            rows.append(list(nxt))
            cur = nxt
        if self.degree == 0:
            rows = [[] for _ in range(max(m, 1))]
        self.reduction = np.array(rows, dtype=np.int64).reshape(m, self.degree)
        self.reduction_max = int(np.abs(self.reduction).max()) if self.degree else 0

    # -- exact operations on length-m integer vectors ----------------------

    def reduce(self, vec) -> tuple:
        v = np.asarray(vec, dtype=np.int64)
        return tuple(int(x) for x in v @ self.reduction)

    def reduce_block(self, block: np.ndarray) -> np.ndarray:
        return block @ self.reduction

    def is_zero(self, vec) -> bool:
        return all(c == 0 for c in self.reduce(vec))

    def equal(self, a, b) -> bool:
        return self.reduce(a) == self.reduce(b)

    def conv(self, a, b) -> np.ndarray:
        """Cyclic convolution: the product of two values."""
        m = self.m
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        full = np.convolve(a, b)
        out = full[:m].copy()
        if len(full) > m:
            out[: len(full) - m] += full[m:]
        return out

    def conjugate(self, a) -> np.ndarray:
        """Complex conjugation: zeta^j -> zeta^{-j}."""
        a = np.asarray(a, dtype=np.int64)
        return np.concatenate([a[:1], a[1:][::-1]])

    def rational_value(self, vec):
        """The integer a vector represents, or None if it is irrational."""
        red = self.reduce(vec)
        if all(c == 0 for c in red[1:]):
            return red[0] if red else 0
        return None

    def to_complex(self, vec) -> complex:
        m = self.m
        ang = np.exp(2j * np.pi * np.arange(m) / m)
        return complex(np.dot(np.asarray(vec, dtype=np.float64), ang))


def cyclotomic_context(m: int) -> CyclotomicContext:
    with _CTX_LOCK:
        ctx = _CTX_CACHE.get(m)
        if ctx is None:
            ctx = CyclotomicContext(m)
            _CTX_CACHE[m] = ctx
    return ctx


def unit_vector(m: int, j: int, coeff: int = 1) -> np.ndarray:
    v = np.zeros(m, dtype=np.int64)
    v[j % m] += coeff
    return v
