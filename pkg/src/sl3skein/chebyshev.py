"""Two-variable Chebyshev-type polynomials for SL3 traces.

``P_{m,1}(x1, x2)`` is the polynomial with ``tr(A^m) = P_{m,1}(tr A, tr A^{-1})``
for every ``A`` in SL3.  It satisfies

    P_0 = 3,  P_1 = x1,  P_2 = x1^2 - 2 x2,
    P_m = x1 P_{m-1} - x2 P_{m-2} + P_{m-3},

and ``P_{m,2}(x1, x2) = P_{m,1}(x2, x1)``.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import NotUnimodular

Monomial = tuple[int, int]


@dataclass(frozen=True)
class BivariatePoly:
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {m: c for m, c in dict(self.terms).items() if c != 0}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def const(cls, c: int) -> "BivariatePoly":
        return cls({(0, 0): c})

    @classmethod
    def x1(cls) -> "BivariatePoly":
        return cls({(1, 0): 1})

    @classmethod
    def x2(cls) -> "BivariatePoly":
        return cls({(0, 1): 1})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = BivariatePoly.const(other)
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return BivariatePoly(out)

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        return self + (-other)

    def __mul__(self, other: "BivariatePoly | int") -> "BivariatePoly":
        if isinstance(other, int):
            return BivariatePoly({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, int] = {}
        for (i, j), c in self.terms.items():
            for (k, l), d in other.terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + c * d
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivariatePoly":
        out = BivariatePoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def swap(self) -> "BivariatePoly":
        return BivariatePoly({(j, i): c for (i, j), c in self.terms.items()})

    def evaluate(self, a: int, b: int) -> int:
        return sum(c * a**i * b**j for (i, j), c in self.terms.items())

    def compose(self, f: "BivariatePoly", g: "BivariatePoly") -> "BivariatePoly":
        """``self(f, g)``."""
        out = BivariatePoly()
        fp = [BivariatePoly.const(1)]
        gp = [BivariatePoly.const(1)]
        for (i, j), c in self.terms.items():
            while len(fp) <= i:
                fp.append(fp[-1] * f)
            while len(gp) <= j:
                gp.append(gp[-1] * g)
            out = out + fp[i] * gp[j] * c
        return out

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), t[0])):
            mono = "*".join(
                ([f"x1^{i}" if i > 1 else "x1"] if i else []) + ([f"x2^{j}" if j > 1 else "x2"] if j else [])
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


@functools.lru_cache(maxsize=None)
def _p1(m: int) -> BivariatePoly:
    x1, x2 = BivariatePoly.x1(), BivariatePoly.x2()
    if m == 0:
        return BivariatePoly.const(3)
    if m == 1:
        return x1
    if m == 2:
        return x1 * x1 - x2 * 2
    return x1 * _p1(m - 1) - x2 * _p1(m - 2) + _p1(m - 3)


def cheb(m: int, i: int = 1) -> BivariatePoly:
    if m < 0:
        raise ValueError("m must be nonnegative")
    if i == 1:
        return _p1(m)
    if i == 2:
        return _p1(m).swap()
    raise ValueError("i must be 1 or 2")


# ---------------------------------------------------------------------------
# integer 3x3 matrices

Mat3 = tuple[tuple[int, int, int], ...]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Mat3:
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def det3(A: Sequence[Sequence[int]]) -> int:
    return (
        A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
        - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
        + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
    )


def adjugate(A: Sequence[Sequence[int]]) -> Mat3:
    def minor(i: int, j: int) -> int:
        r = [x for x in range(3) if x != i]
        c = [x for x in range(3) if x != j]
        return A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]

    return tuple(tuple((-1) ** (i + j) * minor(j, i) for j in range(3)) for i in range(3))


def trace(A: Sequence[Sequence[int]]) -> int:
    return A[0][0] + A[1][1] + A[2][2]


def mat_pow(A: Sequence[Sequence[int]], m: int) -> Mat3:
    out: Mat3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for _ in range(m):
        out = mat_mul(out, A)
    return out


def trace_identity_check(A: Sequence[Sequence[int]], m: int) -> bool:
    if det3(A) != 1:
        raise NotUnimodular(f"determinant is {det3(A)}, not 1")
    lhs = trace(mat_pow(A, m))
    rhs = cheb(m, 1).evaluate(trace(A), trace(adjugate(A)))
    return lhs == rhs


def random_sl3(rng: random.Random, length: int = 12) -> Mat3:
    """Product of ``length`` random elementary transvections ``E_ij(+-1)``."""
    A: Mat3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for _ in range(length):
        i, j = rng.sample(range(3), 2)
        E = [[int(r == c) for c in range(3)] for r in range(3)]
        E[i][j] = rng.choice((1, -1))
        A = mat_mul(A, E)
    return A


def additivity_check(n: int, m: int, i: int) -> bool:
    """``P_{n,i}(P_{m,1}, P_{m,2}) == P_{nm,i}``.

    The composition of trace polynomials multiplies the exponents: it is the
    trace of ``(A^m)^n``.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    return cheb(n, i).compose(cheb(m, 1), cheb(m, 2)) == cheb(n * m, i)


def verify_chebyshev(mmax: int = 12, samples: int = 100, seed: int = 7) -> dict:
    rng = random.Random(seed)
    failures = []
    x1, x2 = BivariatePoly.x1(), BivariatePoly.x2()
    for m in range(3, mmax + 1):
        if cheb(m, 1) != x1 * cheb(m - 1, 1) - x2 * cheb(m - 2, 1) + cheb(m - 3, 1):
            failures.append({"check": "recurrence", "m": m})
    for m in range(mmax + 1):
        if cheb(m, 2) != cheb(m, 1).swap():
            failures.append({"check": "symmetry", "m": m})
    amax = min(mmax, 10)
    for n in range(1, amax + 1):
        for m in range(1, amax // n + 1):
            for i in (1, 2):
                if not additivity_check(n, m, i):
                    failures.append({"check": "additivity", "n": n, "m": m, "i": i})
    mats = [((1, 0, 0), (0, 1, 0), (0, 0, 1)), ((1, 1, 0), (0, 1, 1), (0, 0, 1))]
    mats += [random_sl3(rng) for _ in range(samples)]
    for idx, A in enumerate(mats):
        for m in range(mmax + 1):
            if not trace_identity_check(A, m):
                failures.append({"check": "trace", "matrix": [list(r) for r in A], "m": m})
    return {"pass": not failures, "failures": failures, "matrices": len(mats), "mmax": mmax}
