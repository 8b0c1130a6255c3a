"""Exact ordinary character tables by the class-algebra (Burnside/Dixon) method.

Pipeline: conjugacy classes -> class-multiplication matrices over a prime
field F_p with p = 1 (mod exp(G)) and p > 2*sqrt(|G|) -> simultaneous
one-dimensional eigenspaces -> central character values mod p -> exact
eigenvalue-multiplicity vectors by discrete-Fourier interpolation over the
power map.  Every value is an integer vector in the zeta-basis of order
exp(G); orthogonality is verified exactly (see verify-* methods).

Abelian groups bypass the eigenvalue machinery: their table is the dual
group read off the invariant-factor decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cyclotomic import CyclotomicContext, cyclotomic_context
from .errors import BudgetExceeded, MalformedSpec
from .groupops import ConjugacyData, abelian_decomposition, conjugacy_classes
from .groups import FiniteGroup
from .numutil import element_of_order_mod, next_prime_in_progression

_MAX_PRIME_REDRAWS = 6
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class CharacterTable:
    """Exact character table with deterministic row and column order.

    `mults[c, i, j]` counts eigenvalues zeta^j of character c at class i;
    the value chi_c(g_i) is sum_j mults[c,i,j] * zeta_m^j with m = basis_order.
    Characters are sorted by (degree, reduced value vectors); classes by
    (element order, minimal representative), identity first.
    """

    group: FiniteGroup
    classes: ConjugacyData
    basis_order: int
    degrees: tuple
    mults: np.ndarray
    dixon_prime: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def count(self) -> int:
        return len(self.degrees)

    @property
    def context(self) -> CyclotomicContext:
        return cyclotomic_context(self.basis_order)

    def reduced_values(self) -> np.ndarray:
        """Canonical power-basis coordinates, shape (chars, classes, phi(m))."""
        if "reduced" not in self._cache:
            k = self.count
            block = self.mults.reshape(k * len(self.classes.reps), self.basis_order)
            red = self.context.reduce_block(block)
            self._cache["reduced"] = red.reshape(k, len(self.classes.reps), -1)
        return self._cache["reduced"]

    def value_vector(self, char_index: int, class_index: int) -> np.ndarray:
        return self.mults[char_index, class_index]

    # -- exact verification -------------------------------------------------

    def check_basic_invariants(self) -> None:
        G = self.group
        k = self.classes.count
        if self.count != k:
            raise MalformedSpec("character count differs from class count")
        if sum(d * d for d in self.degrees) != G.order:
            raise MalformedSpec("sum of squared degrees differs from group order")
        for c, d in enumerate(self.degrees):
            if G.order % d:
                raise MalformedSpec(f"degree {d} does not divide |G|")
            col0 = self.mults[c, 0]
            if col0[0] != d or np.any(col0[1:]):
                raise MalformedSpec("first-column value does not equal the degree")

    def verify_orthogonality(self) -> None:
        """Exact row and column orthogonality via a modular DFT certificate.

        The weighted pairwise products are integer vectors with coordinates
        in [0, |G|^2]; evaluating at all m-th roots of unity mod a prime
        q > |G|^2 determines them exactly, and the inverse transform is
        compared against the orthogonality targets after reduction mod
        Phi_m.
        """
        G = self.group
        k = self.count
        m = self.basis_order
        sizes = np.array(self.classes.sizes, dtype=np.int64)
        bound = G.order * G.order + G.order
        q = next_prime_in_progression(m, bound)
        z = element_of_order_mod(m, q)
        powers = np.array([pow(z, t, q) for t in range(m)], dtype=np.int64)
        V = powers[np.multiply.outer(np.arange(m), np.arange(m)) % m]  # V[j,t]=z^{jt}
        minv = pow(m, -1, q) if m > 1 else 1
        zinv = pow(z, -1, q)
        ipowers = np.array([pow(zinv, t, q) for t in range(m)], dtype=np.int64)
        Winv = (ipowers[np.multiply.outer(np.arange(m), np.arange(m)) % m] * minv) % q

        F = self.mults.reshape(k * k, m) @ V % q          # eval at z^t
        F = F.reshape(k, k, m)
        Fflip = F[:, :, (-np.arange(m)) % m]              # conjugate evaluations

        if max(k, m) * q * q >= _INT64_SAFE:
            raise MalformedSpec("orthogonality certificate exceeds int64 range")

        ctx = self.context
        red = ctx.reduction
        phi = ctx.degree
        if ctx.reduction_max and q * ctx.reduction_max * m >= _INT64_SAFE:
            raise MalformedSpec("reduction certificate exceeds int64 range")

        def assert_reduced(u_flat, expect):
            coords = u_flat @ red
            if not np.array_equal(coords, expect):
                raise MalformedSpec("orthogonality fails exactly")

        # row orthogonality: sum_i |C_i| chi_r(g_i) conj(chi_s(g_i)) = delta * |G|
        Fw = (sizes[None, :, None] * F) % q
        U_hat = np.einsum("rit,sit->rst", Fw, Fflip) % q
        u = U_hat.reshape(k * k, m) @ Winv % q            # exact lift: coords < q
        expect = np.zeros((k, k, phi), dtype=np.int64)
        idx = np.arange(k)
        if phi:
            expect[idx, idx, 0] = G.order
        assert_reduced(u, expect.reshape(k * k, phi))

        # column orthogonality: sum_c chi_c(g_i) conj(chi_c(g_j)) = delta * |C_G(g_i)|
        U2 = np.einsum("rit,rjt->ijt", F, Fflip) % q
        u2 = U2.reshape(k * k, m) @ Winv % q
        expect2 = np.zeros((k, k, phi), dtype=np.int64)
        if phi:
            expect2[idx, idx, 0] = G.order // sizes
        assert_reduced(u2, expect2.reshape(k * k, phi))

    def verify_regular_diagonal_direct(self) -> None:
        """Independent route: sum_i |C_i| chi(g_i) conj(chi(g_i)) = |G|,
        computed with direct convolution and Phi_m reduction (no DFT)."""
        ctx = self.context
        G = self.group
        sizes = self.classes.sizes
        for c in range(self.count):
            acc = np.zeros(self.basis_order, dtype=np.int64)
            for i in range(len(sizes)):
                v = self.mults[c, i]
                acc = acc + sizes[i] * ctx.conv(v, ctx.conjugate(v))
            acc[0] -= G.order
            if not ctx.is_zero(acc):
                raise MalformedSpec("regular-character cross check fails")

    # -- export --------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "group": self.group.name,
            "order": self.group.order,
            "basis_order": self.basis_order,
            "classes": [
                {"representative": repr(r), "size": s, "element_order": o}
                for r, s, o in zip(
                    self.classes.reps, self.classes.sizes, self.classes.rep_orders
                )
            ],
            "characters": [
                {
                    "degree": int(self.degrees[c]),
                    "values": [[int(x) for x in self.mults[c, i]]
                               for i in range(self.classes.count)],
                }
                for c in range(self.count)
            ],
        }


# ---------------------------------------------------------------------------
# construction

def character_table(G: FiniteGroup, budget: int | None = None) -> CharacterTable:
    if "chartab" in G._cache:
        return G._cache["chartab"]
    if budget is not None and G.order > budget:
        raise BudgetExceeded(f"character table of order {G.order} exceeds budget")
    table = _abelian_table(G) if G.is_abelian() else _dixon_table(G)
    table.check_basic_invariants()
    G._cache["chartab"] = table
    return table


def _sorted_table(G, data, m, degrees, mults, prime) -> CharacterTable:
    ctx = cyclotomic_context(m)
    k = len(degrees)
    red = ctx.reduce_block(mults.reshape(k * data.count, m)).reshape(k, data.count, -1)
    keys = sorted(
        range(k),
        key=lambda c: (degrees[c], tuple(int(x) for x in red[c].reshape(-1))),
    )
    return CharacterTable(
        group=G,
        classes=data,
        basis_order=m,
        degrees=tuple(degrees[c] for c in keys),
        mults=np.ascontiguousarray(mults[keys]),
        dixon_prime=prime,
    )


def _abelian_table(G: FiniteGroup) -> CharacterTable:
    data = conjugacy_classes(G)
    dec = abelian_decomposition(G)
    m = max(dec.invariants) if dec.invariants else 1
    k = G.order
    mults = np.zeros((k, k, m), dtype=np.int64)
    scales = [m // d for d in dec.invariants]
    tuples = [()]
    for d in dec.invariants:
        tuples = [t + (r,) for t in tuples for r in range(d)]
    for c, a in enumerate(tuples):
        for i, rep in enumerate(data.reps):
            t = dec.coords[rep]
            e = sum(ai * ti * s for ai, ti, s in zip(a, t, scales)) % m
            mults[c, i, e] = 1
    return _sorted_table(G, data, m, [1] * k, mults, 0)


def _dixon_prime(G: FiniteGroup, m: int, k: int, attempt: int) -> int:
    lower = max(2 * math.isqrt(G.order) + 1, 2 * k, m)
    p = next_prime_in_progression(m, lower)
    for _ in range(attempt):
        p = next_prime_in_progression(m, p)
    return p


def _dixon_table(G: FiniteGroup) -> CharacterTable:
    data = conjugacy_classes(G)
    k = data.count
    m = G.exponent()
    last_error = None
    for attempt in range(_MAX_PRIME_REDRAWS):
        p = _dixon_prime(G, m, k, attempt)
        try:
            degrees, mults = _dixon_with_prime(G, data, m, p)
            return _sorted_table(G, data, m, degrees, mults, p)
        except _SplitFailure as exc:   # degenerate split: redraw p
            last_error = exc
    raise MalformedSpec(f"character table did not split after redraws: {last_error}")


class _SplitFailure(Exception):
    pass


def _class_matrix(G, data, i, elements_by_class):
    """A_i with (A_i)[j, t] = #{x in C_i : x^{-1} z_t in C_j}."""
    k = data.count
    A = np.zeros((k, k), dtype=np.int64)
    for t in range(k):
        z = data.reps[t]
        for x in elements_by_class[i]:
            j = data.class_of[G.op(G.inv(x), z)]
            A[j, t] += 1
    return A


def _rref_mod(M, p):
    A = M % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            A[[r, pivot]] = A[[pivot, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for rr in range(rows):
            if rr != r and A[rr, c]:
                A[rr] = (A[rr] - A[rr, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _nullspace_mod(M, p):
    R, pivots = _rref_mod(M, p)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r, f]) % p
        basis.append(v % p)
    return basis


def _charpoly_mod(M, p):
    """Faddeev-LeVerrier characteristic polynomial mod p (needs p > dim)."""
    d = M.shape[0]
    coeffs = [1]
    Mk = M.copy() % p
    for kk in range(1, d + 1):
        ck = (-int(np.trace(Mk)) * pow(kk, -1, p)) % p
        coeffs.append(ck)
        if kk < d:
            Mk = (M @ ((Mk + ck * np.eye(d, dtype=np.int64)) % p)) % p
    return coeffs  # descending powers: x^d + c1 x^{d-1} + ... + cd


def _poly_roots_mod(coeffs, p):
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        acc = (acc * xs + c) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _dixon_with_prime(G, data, m, p):
    k = data.count
    elements_by_class = [[] for _ in range(k)]
    for x in G.elements:
        elements_by_class[data.class_of[x]].append(x)

    # invariant subspaces kept in reduced row echelon form: S[:, pivots] = I,
    # so the restricted action of A^T is (S A^T)[:, pivots]
    spaces = [(np.eye(k, dtype=np.int64), list(range(k)))]
    for i in range(1, k):
        if all(S.shape[0] == 1 for S, _ in spaces):
            break
        A = _class_matrix(G, data, i, elements_by_class) % p
        At = A.T % p
        new_spaces = []
        for S, pivots in spaces:
            if S.shape[0] == 1:
                new_spaces.append((S, pivots))
                continue
            M = (S @ At % p)[:, pivots]
            for lam in _poly_roots_mod(_charpoly_mod(M, p), p):
                # coefficient rows transform by c -> c M, so split by left kernels
                shifted = (M - lam * np.eye(M.shape[0], dtype=np.int64)) % p
                ker = _nullspace_mod(shifted.T % p, p)
                if ker:
                    K = np.array(ker, dtype=np.int64) % p
                    sub, sub_piv = _rref_mod(K @ S % p, p)
                    if sub.shape[0] != len(ker):
                        raise _SplitFailure("eigenspace basis lost rank")
                    new_spaces.append((sub, sub_piv))
        if sum(S.shape[0] for S, _ in new_spaces) != k:
            raise _SplitFailure("eigenspace split lost dimensions")
        spaces = new_spaces
    if not all(S.shape[0] == 1 for S, _ in spaces):
        raise _SplitFailure("joint eigenspaces not one-dimensional")
    spaces = [S for S, _ in spaces]

    sizes = np.array(data.sizes, dtype=np.int64)
    inv_class = np.array([data.inverse_class(i) for i in range(k)], dtype=np.int64)
    size_inv = np.array([pow(int(s), -1, p) for s in sizes], dtype=np.int64)
    omegas = []
    for S in spaces:
        v = S[0] % p
        if v[0] == 0:
            raise _SplitFailure("eigenvector vanishes on the identity class")
        omegas.append(v * pow(int(v[0]), -1, p) % p)

    degrees = []
    X = np.zeros((k, k), dtype=np.int64)
    isq = math.isqrt(G.order)
    for c, w in enumerate(omegas):
        s = int(np.sum(w * w[inv_class] % p * size_inv % p) % p)
        d2 = G.order * pow(s, -1, p) % p
        d = next((t for t in range(1, isq + 1) if t * t % p == d2), None)
        if d is None:
            raise _SplitFailure("degree recovery failed")
        degrees.append(d)
        X[c] = d * w % p * size_inv % p

    # power map: class of rep^t for t mod m
    pmap = np.zeros((k, m), dtype=np.int64)
    for i in range(k):
        rep = data.reps[i]
        o = data.rep_orders[i]
        cycle = []
        x = G.identity
        for _ in range(o):
            cycle.append(data.class_of[x])
            x = G.op(x, rep)
        pmap[i] = [cycle[t % o] for t in range(m)]

    z = element_of_order_mod(m, p)
    zpow = np.array([pow(z, -t % m if m > 1 else 0, p) for t in range(m)], dtype=np.int64)
    Zinv = zpow[np.multiply.outer(np.arange(m), np.arange(m)) % m]  # [t,j] = z^{-tj}
    minv = pow(m, -1, p) if m > 1 else 1

    Y = X[:, pmap]                       # (k_chars, k_classes, m)
    n = Y.reshape(k * k, m) @ Zinv % p * minv % p
    mults = n.reshape(k, k, m)

    for c in range(k):
        d = degrees[c]
        if np.any(mults[c] > d):
            raise _SplitFailure("lifted multiplicity exceeds the degree")
        if not np.all(mults[c].sum(axis=1) == d):
            raise _SplitFailure("lifted multiplicities do not sum to the degree")
    for i in range(k):
        o = data.rep_orders[i]
        step = m // o
        allowed = np.zeros(m, dtype=bool)
        allowed[::step] = True
        if np.any(mults[:, i, ~allowed]):
            raise _SplitFailure("eigenvalue outside the subgroup of allowed roots")
    return degrees, mults
