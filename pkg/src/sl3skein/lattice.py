"""Exact integer linear algebra on Python ints.

Matrices are lists of rows.  Lattices are generated by rows, so a vector
``x`` lies in the lattice of ``B`` when ``x = y B`` for an integer row ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .errors import NotASublattice

Matrix = list[list[int]]


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "Infinite"


Infinite = _Infinite()


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return [[int(x) for x in r] for r in rows]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(c) for c in zip(*A)]


def det(A: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass
class _SNF:
    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix


def _snf(A: Matrix) -> _SNF:
    m = len(A)
    n = len(A[0]) if m else 0
    W = [row[:] for row in A]
    U, Uinv, V, Vinv = identity(m), identity(m), identity(n), identity(n)

    # A = U W V is kept invariant; Uinv W... i.e. W = Uinv A Vinv
    def row_add(i: int, j: int, c: int) -> None:  # row_i += c row_j
        if c == 0:
            return
        W[i] = [a + c * b for a, b in zip(W[i], W[j])]
        Uinv[i] = [a + c * b for a, b in zip(Uinv[i], Uinv[j])]
        for r in U:
            r[j] -= c * r[i]

    def col_add(i: int, j: int, c: int) -> None:  # col_i += c col_j
        if c == 0:
            return
        for r in W:
            r[i] += c * r[j]
        for r in Vinv:
            r[i] += c * r[j]
        V[j] = [a - c * b for a, b in zip(V[j], V[i])]

    def row_swap(i: int, j: int) -> None:
        if i != j:
            W[i], W[j] = W[j], W[i]
            Uinv[i], Uinv[j] = Uinv[j], Uinv[i]
            for r in U:
                r[i], r[j] = r[j], r[i]

    def col_swap(i: int, j: int) -> None:
        if i != j:
            for r in W:
                r[i], r[j] = r[j], r[i]
            for r in Vinv:
                r[i], r[j] = r[j], r[i]
            V[i], V[j] = V[j], V[i]

    def row_neg(i: int) -> None:
        W[i] = [-a for a in W[i]]
        Uinv[i] = [-a for a in Uinv[i]]
        for r in U:
            r[i] = -r[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = abs(W[i][j])
                    if a and (best is None or a < best[0]):
                        best = (a, i, j)
                        if a == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            row_swap(t, i)
            col_swap(t, j)
            p = W[t][t]
            dirty = False
            for i in range(t + 1, m):
                if W[i][t]:
                    row_add(i, t, -(W[i][t] // p))
                    dirty |= W[i][t] != 0
            for j in range(t + 1, n):
                if W[t][j]:
                    col_add(j, t, -(W[t][j] // p))
                    dirty |= W[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(W[i][j] % p for j in range(t + 1, n))), None
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if W[t][t] < 0:
            row_neg(t)
    return _SNF(U, W, V, Uinv, Vinv)


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``A = U D V``, ``U``, ``V`` unimodular and the
    diagonal of ``D`` a nonnegative divisibility chain."""
    s = _snf(as_matrix(A))
    return s.U, s.D, s.V


def elementary_divisors(A: Sequence[Sequence[int]]) -> list[int]:
    A = as_matrix(A)
    if not A or not A[0]:
        return []
    D = _snf(A).D
    return [D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i] != 0]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF with zero rows removed (a canonical lattice basis)."""
    M = [r[:] for r in as_matrix(rows)]
    if not M:
        return []
    n = len(M[0])
    out: Matrix = []
    r0 = 0
    for c in range(n):
        # gcd-combine column c over rows r0.. into row r0
        for i in range(r0 + 1, len(M)):
            while M[i][c]:
                q = M[r0][c] // M[i][c]
                M[r0] = [a - q * b for a, b in zip(M[r0], M[i])]
                M[r0], M[i] = M[i], M[r0]
        if r0 < len(M) and M[r0][c]:
            if M[r0][c] < 0:
                M[r0] = [-a for a in M[r0]]
            p = M[r0][c]
            for i in range(r0):
                q = M[i][c] // p
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[r0])]
            r0 += 1
        if r0 >= len(M):
            break
    out = [r for r in M[:r0]]
    return out


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hermite_normal_form(rows))


def solve_left(B: Sequence[Sequence[int]], X: Sequence[Sequence[int]]) -> list[list[Fraction]] | None:
    """Rational ``Y`` with ``Y B = X``, or None if some row of X is outside the
    rational row space of ``B`` (whose rows must be independent)."""
    r = len(B)
    n = len(B[0]) if r else len(X[0]) if X else 0
    # eliminate on the transposed system B^T y^T = x^T, all right sides at once
    aug = [[Fraction(B[i][j]) for i in range(r)] + [Fraction(x[j]) for x in X] for j in range(n)]
    piv_cols = []
    row = 0
    for c in range(r):
        p = next((i for i in range(row, n) if aug[i][c] != 0), None)
        if p is None:
            raise NotASublattice("basis rows are linearly dependent")
        aug[row], aug[p] = aug[p], aug[row]
        inv = 1 / aug[row][c]
        aug[row] = [a * inv for a in aug[row]]
        for i in range(n):
            if i != row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        piv_cols.append(c)
        row += 1
    for i in range(row, n):
        if any(a != 0 for a in aug[i][r:]):
            return None
    return [[aug[c][r + k] for c in range(r)] for k in range(len(X))]


@dataclass(frozen=True)
class SublatticeBasis:
    dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Iterable[int]], dim: int | None = None) -> "SublatticeBasis":
        rows = as_matrix(gens)
        d = dim if dim is not None else (len(rows[0]) if rows else 0)
        return cls(d, tuple(tuple(r) for r in hermite_normal_form(rows)))

    @classmethod
    def standard(cls, dim: int) -> "SublatticeBasis":
        return cls(dim, tuple(tuple(r) for r in identity(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Matrix:
        return [list(r) for r in self.basis]

    def coordinates(self, vectors: Sequence[Sequence[int]]) -> list[list[Fraction]] | None:
        return solve_left(self.matrix, as_matrix(vectors))

    def contains(self, v: Sequence[int]) -> bool:
        if not self.basis:
            return not any(v)
        y = self.coordinates([v])
        return y is not None and all(c.denominator == 1 for c in y[0])

    def scaled(self, m: int) -> "SublatticeBasis":
        return SublatticeBasis(self.dim, tuple(tuple(m * a for a in r) for r in self.basis))

    def membership_certificate(self) -> tuple[Matrix, int]:
        """For a full-rank lattice ``L = ZZ^n H``: ``(A, d)`` with
        ``x in L  <=>  x A == 0 (mod d)``, where ``A = d H^{-1}``."""
        if self.rank != self.dim:
            raise ValueError("membership certificate needs a full-rank lattice")
        H = self.matrix
        d = abs(det(H))
        inv = solve_left(H, identity(self.dim))  # inv H = I, so inv = H^{-1}
        A = [[int(c * d) for c in row] for row in inv]
        return A, d


def lattice_index(sup: SublatticeBasis, sub_gens: Sequence[Sequence[int]]):
    """``[sup : <sub_gens>]`` as an int, or ``Infinite`` when the rank drops."""
    gens = as_matrix(sub_gens)
    if sup.rank == 0:
        return 1
    if not gens:
        return Infinite
    Y = sup.coordinates(gens)
    if Y is None or any(c.denominator != 1 for row in Y for c in row):
        raise NotASublattice("a generator is not in the ambient lattice")
    C = [[int(c) for c in row] for row in Y]
    divs = elementary_divisors(C)
    if len(divs) < sup.rank:
        return Infinite
    return prod(divs)


def kernel_mod_m_lattice(A: Sequence[Sequence[int]], m: int, ambient: SublatticeBasis) -> SublatticeBasis:
    """Basis of ``{x in ambient : x A == 0 (mod m)}``."""
    if m < 1:
        raise ValueError("modulus must be positive")
    Bm = ambient.matrix
    A = as_matrix(A)
    C = matmul(Bm, A)
    r = len(Bm)
    if not C or not C[0]:
        return SublatticeBasis.from_generators(Bm, ambient.dim)
    s = _snf(C)
    gens = []
    for i in range(r):
        d = s.D[i][i] if i < len(s.D[0]) else 0
        f = m // gcd(m, d)
        gens.append([f * a for a in s.Uinv[i]])
    return SublatticeBasis.from_generators(matmul(gens, Bm), ambient.dim)


# ---------------------------------------------------------------------------
# enumeration

GE = ">=0"
MOD3 = "mod3"


def enumerate_points(
    constraints: Sequence[tuple[Sequence[int], str, int]], dim: int, cap: int
) -> list[tuple[int, ...]]:
    """All ``x in NN^dim`` with ``sum(x) <= cap`` satisfying every constraint.

    A constraint ``(v, rel, c)`` reads ``v.x + c >= 0`` or ``v.x + c == 0 (mod 3)``.
    Output is sorted by ``(sum, entries)``.
    """
    if cap < 0:
        return []
    ge = [(list(v), c) for v, rel, c in constraints if rel == GE]
    md = [(list(v), c) for v, rel, c in constraints if rel == MOD3]
    for _, rel, _ in constraints:
        if rel not in (GE, MOD3):
            raise ValueError(f"unknown relation {rel!r}")
    # best possible future gain of each >=0 constraint from coordinates i..
    gain = [[max([0] + v[i:]) for i in range(dim + 1)] for v, _ in ge]
    # index after which every remaining coefficient of a mod constraint is 0 mod 3
    settle = [max([i + 1 for i in range(dim) if v[i] % 3] + [0]) for v, _ in md]
    out: list[tuple[int, ...]] = []
    x = [0] * dim

    def rec(i: int, left: int, gv: list[int], mv: list[int]) -> None:
        for k, (g, best) in enumerate(zip(gv, gain)):
            if g + left * best[i] < 0:
                return
        for k, s in enumerate(settle):
            if s <= i and mv[k] % 3:
                return
        if i == dim:
            out.append(tuple(x))
            return
        for val in range(left + 1):
            x[i] = val
            rec(
                i + 1,
                left - val,
                [g + v[i] * val for g, (v, _) in zip(gv, ge)],
                [s + v[i] * val for s, (v, _) in zip(mv, md)],
            )
        x[i] = 0

    rec(0, cap, [c for _, c in ge], [c for _, c in md])
    out.sort(key=lambda p: (sum(p), p))
    return out


def iter_box(dim: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Every ``x in NN^dim`` with ``sum(x) <= cap`` (unsorted)."""
    x = [0] * dim

    def rec(i: int, left: int):
        if i == dim:
            yield tuple(x)
            return
        for v in range(left + 1):
            x[i] = v
            yield from rec(i + 1, left - v)
        x[i] = 0

    yield from rec(0, cap)
