"""Exact integer linear algebra: Smith normal form and mod-q lattice helpers.

All matrices are small (rank <= ~8) lists of Python ints, so everything is
done with exact arithmetic and no external solver.
"""

from __future__ import annotations

from dataclasses import dataclass


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf_with_transforms(B):
    """Smith normal form with full transforms.

    Returns (D, U, V, Uinv, Vinv) with U*B*V = D, U and V unimodular,
    Uinv = U^{-1}, Vinv = V^{-1}.  D has the divisibility chain
    d_1 | d_2 | ... on its diagonal, all entries non-negative.
    """
    A = [list(row) for row in B]
    m = len(A)
    n = len(A[0]) if m else 0
    U, Uinv = _identity(m), _identity(m)
    V, Vinv = _identity(n), _identity(n)

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in range(m):
            Uinv[r][i], Uinv[r][j] = Uinv[r][j], Uinv[r][i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for r in range(m):
            Uinv[r][i] = -Uinv[r][i]

    def row_add(i, j, c):
        # row_i += c * row_j
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for r in range(m):
            Uinv[r][j] -= c * Uinv[r][i]

    def col_swap(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_neg(j):
        for r in range(m):
            A[r][j] = -A[r][j]
        for r in range(n):
            V[r][j] = -V[r][j]
        Vinv[j] = [-x for x in Vinv[j]]

    def col_add(j, i, c):
        # col_j += c * col_i
        for r in range(m):
            A[r][j] += c * A[r][i]
        for r in range(n):
            V[r][j] += c * V[r][i]
        Vinv[i] = [a - c * b for a, b in zip(Vinv[i], Vinv[j])]

    t = 0
    while t < min(m, n):
        # locate the smallest nonzero entry in the trailing submatrix
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot != (t, t):
            if pivot[0] != t:
                row_swap(t, pivot[0])
            if pivot[1] != t:
                col_swap(t, pivot[1])
        if A[t][t] < 0:
            row_neg(t)
        dirty = False
        for i in range(t + 1, m):
            if A[i][t] != 0:
                q = A[i][t] // A[t][t]
                row_add(i, t, -q)
                if A[i][t] != 0:
                    dirty = True
        for j in range(t + 1, n):
            if A[t][j] != 0:
                q = A[t][j] // A[t][t]
                col_add(j, t, -q)
                if A[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility d_t | A[i][j]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        t += 1
    D = A
    return D, U, V, Uinv, Vinv


def snf_diagonal(B):
    """Nonzero invariant factors of an integer matrix (divisibility order)."""
    D, *_ = snf_with_transforms(B)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i] != 0:
            out.append(D[i][i])
    return out


def mat_vec(M, v, q=0):
    out = [sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M))]
    return tuple(x % q for x in out) if q else tuple(out)


def mat_mul(A, B, q=0):
    n, k, m = len(A), len(B), len(B[0])
    out = [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]
    if q:
        out = [[x % q for x in row] for row in out]
    return out


def mat_pow(M, e, q=0):
    n = len(M)
    out = _identity(n)
    base = [list(r) for r in M]
    while e:
        if e & 1:
            out = mat_mul(out, base, q)
        base = mat_mul(base, base, q)
        e >>= 1
    return out


def mat_sub_identity(M):
    return [[M[i][j] - (1 if i == j else 0) for j in range(len(M))] for i in range(len(M))]


def kernel_mod(M, q):
    """Generators and order of {x in (Z/q)^n : M x = 0 mod q}.

    Uses U M V = D: with x = V y the system becomes d_i y_i = 0 mod q,
    so y_i ranges over multiples of q/gcd(d_i, q).
    """
    import math

    m = len(M)
    n = len(M[0])
    D, U, V, Uinv, Vinv = snf_with_transforms(M)
    gens = []
    order = 1
    for j in range(n):
        d = D[j][j] if j < m else 0
        g = math.gcd(d, q)
        step = q // g if g else 1
        sub_order = g if d else q
        if d == 0:
            step = 1
            sub_order = q
        if sub_order > 1:
            gen = tuple((V[i][j] * step) % q for i in range(n))
            gens.append(gen)
            order *= sub_order
    return gens, order


def solve_mod(M, z, q):
    """One solution of M x = z mod q, or None."""
    import math

    m = len(M)
    n = len(M[0])
    D, U, V, Uinv, Vinv = snf_with_transforms(M)
    uz = mat_vec(U, list(z), q)
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < min(m, n) else 0
        rhs = uz[i] % q
        if d == 0:
            if rhs % q != 0:
                return None
            continue
        g = math.gcd(d, q)
        if rhs % g != 0:
            return None
        dd, qq, rr = d // g, q // g, rhs // g
        y[i] = (rr * pow(dd, -1, qq)) % qq if qq > 1 else 0
    return mat_vec(V, y, q)


def span_mod(gens, q, n):
    """All elements of the subgroup of (Z/q)^n generated by `gens`."""
    seen = {tuple([0] * n)}
    frontier = [tuple([0] * n)]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % q for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class CokernelMod:
    """(Z/q)^n modulo the column span of an integer matrix M.

    Coordinates come from U in the Smith form of [M | qI]: an element x maps
    to ((U x)_i mod d_i) over the positions with d_i > 1.
    """

    q: int
    n: int
    invariants: tuple
    positions: tuple
    U: tuple
    Uinv: tuple

    @staticmethod
    def of_matrix(M, q) -> "CokernelMod":
        n = len(M)
        B = [[M[i][j] for j in range(len(M[0]))] + [q if i == k else 0 for k in range(n)]
             for i in range(n)]
        D, U, V, Uinv, Vinv = snf_with_transforms(B)
        invariants, positions = [], []
        for i in range(n):
            d = D[i][i]
            if d > 1:
                invariants.append(d)
                positions.append(i)
        return CokernelMod(
            q=q,
            n=n,
            invariants=tuple(invariants),
            positions=tuple(positions),
            U=tuple(tuple(r) for r in U),
            Uinv=tuple(tuple(r) for r in Uinv),
        )

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def project(self, x) -> tuple:
        ux = [sum(self.U[i][j] * x[j] for j in range(self.n)) for i in range(self.n)]
        return tuple(ux[p] % d for p, d in zip(self.positions, self.invariants))

    def lift(self, coords) -> tuple:
        y = [0] * self.n
        for p, c in zip(self.positions, coords):
            y[p] = c
        return tuple(sum(self.Uinv[i][j] * y[j] for j in range(self.n)) for i in range(self.n))

    def induced_action(self, W):
        """Action on quotient coordinates induced by a matrix W preserving the span.

        Callers should verify well-definedness once via
        verify_action_well_defined (projecting W applied to span columns).
        """
        def act(coords):
            lifted = self.lift(coords)
            moved = [sum(W[i][j] * lifted[j] for j in range(self.n)) for i in range(self.n)]
            return self.project(moved)

        return act

    def verify_action_well_defined(self, W, M) -> bool:
        zero = tuple([0] * len(self.invariants))
        for j in range(len(M[0])):
            col = [M[i][j] for i in range(self.n)]
            moved = [sum(W[i][t] * col[t] for t in range(self.n)) for i in range(self.n)]
            if self.project(moved) != zero:
                return False
        return True
