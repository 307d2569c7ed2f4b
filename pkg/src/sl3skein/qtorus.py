"""Quantum tori with Weyl-ordered monomials over exact scalars.

Monomials multiply by ``x^a x^b = qhat^<a,b> x^(a+b)`` with ``<a,b> = a Q b^T``.
Scalars are either Laurent polynomials in ``qhat`` (generic mode) or
elements of ``Z[x]/Phi_{2M}(x)`` with ``x`` a primitive ``2M``-th root of
unity, so that ``qhat^2`` has order exactly ``M``.

A torus may evaluate ``qhat`` at a power of ``x``: the torus attached to
``eta_hat = omega_hat^(N^2)`` shares the scalar ring of the ``omega_hat``
torus and sets ``qhat = x^(N^2)``.  Scalars then pass between the two
unchanged.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence

from sympy import Poly, cyclotomic_poly, symbols

from .errors import OrderMismatch, ScalarModeMismatch, ZeroElement
from .cone import degree_key
from .surface import QMatrix, Triangulation, cut_along_edge, quiver_matrix

Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# root data


@dataclass(frozen=True)
class RootData:
    """Orders derived from ``M``, the order of ``qhat^2``."""

    M: int

    def __post_init__(self) -> None:
        if self.M < 1:
            raise ValueError("M must be at least 1")

    @property
    def N_prime(self) -> int:
        return self.M // gcd(self.M, 6)

    @property
    def N(self) -> int:
        return self.N_prime // gcd(self.N_prime, 3)

    @property
    def div3(self) -> bool:
        return self.N_prime % 3 == 0

    @property
    def r(self) -> int:
        return gcd(self.N_prime, 3)

    def to_json(self) -> dict:
        return {"M": self.M, "N_prime": self.N_prime, "N": self.N, "div3": self.div3}

    @classmethod
    def for_n_prime(cls, n_prime: int) -> "RootData":
        """Smallest ``M`` whose derived ``N'`` equals ``n_prime``."""
        for M in range(1, 6 * n_prime + 1):
            if M // gcd(M, 6) == n_prime:
                return cls(M)
        raise ValueError(f"no M gives N' = {n_prime}")


def order_mod(e: int, modulus: int) -> int:
    """Multiplicative order of ``x^e`` when ``x`` has order ``modulus``."""
    return modulus // gcd(modulus, e)


# ---------------------------------------------------------------------------
# scalar rings


class CyclotomicRing:
    """``Z[x]/Phi_{2M}(x)``; elements are coefficient tuples of length ``phi(2M)``."""

    def __init__(self, M: int):
        if M < 1:
            raise ValueError("M must be at least 1")
        self.M = M
        self.period = 2 * M
        x = symbols("x")
        coeffs = [int(c) for c in Poly(cyclotomic_poly(self.period, x), x).all_coeffs()][::-1]
        self.phi = tuple(coeffs)
        self.deg = len(coeffs) - 1
        # reduction of x^e for 0 <= e < 2 deg (products) and 0 <= e < period (powers)
        top = max(2 * self.deg, self.period)
        table = []
        cur = [0] * self.deg
        cur[0] = 1
        for _ in range(top):
            table.append(tuple(cur))
            # multiply by x: shift, then reduce the overflow with the monic phi
            over = cur[-1]
            cur = [0] + cur[:-1]
            if over:
                cur = [c - over * p for c, p in zip(cur, self.phi[:-1])]
        self._pow = table

    @property
    def key(self) -> tuple:
        return ("cyc", self.M)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclotomicRing) and other.M == self.M

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"CyclotomicRing(M={self.M})"

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.deg

    def one(self) -> tuple[int, ...]:
        return self._pow[0]

    def from_int(self, n: int) -> tuple[int, ...]:
        return tuple(n * c for c in self._pow[0])

    def xpow(self, e: int) -> tuple[int, ...]:
        return self._pow[e % self.period]

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[: self.deg])
        for e in range(self.deg, len(prod)):
            c = prod[e]
            if c:
                row = self._pow[e]
                for i in range(self.deg):
                    out[i] += c * row[i]
        return tuple(out)

    def is_zero(self, a) -> bool:
        return not any(a)

    def to_json(self, a) -> list[int]:
        return list(a)

    def from_json(self, obj) -> tuple[int, ...]:
        out = self.zero()
        for e, c in enumerate(obj):
            if c:
                out = self.add(out, tuple(int(c) * t for t in self.xpow(e)))
        return out


class LaurentRing:
    """``Z[x, x^-1]`` with ``x = qhat``; elements are sorted ``((exp, coef), ...)``."""

    M = None
    key = ("laurent",)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentRing)

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return "LaurentRing()"

    @staticmethod
    def _norm(d: Mapping[int, int]):
        return tuple(sorted((e, c) for e, c in d.items() if c))

    def zero(self):
        return ()

    def one(self):
        return ((0, 1),)

    def from_int(self, n: int):
        return ((0, n),) if n else ()

    def xpow(self, e: int):
        return ((e, 1),)

    def add(self, a, b):
        d = dict(a)
        for e, c in b:
            d[e] = d.get(e, 0) + c
        return self._norm(d)

    def neg(self, a):
        return tuple((e, -c) for e, c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        d: dict[int, int] = {}
        for e1, c1 in a:
            for e2, c2 in b:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return self._norm(d)

    def is_zero(self, a) -> bool:
        return not a

    def to_json(self, a):
        return [[e, c] for e, c in a]

    def from_json(self, obj):
        return self._norm({int(e): int(c) for e, c in obj})


@functools.lru_cache(maxsize=32)
def cyclotomic_ring(M: int) -> CyclotomicRing:
    return CyclotomicRing(M)


# ---------------------------------------------------------------------------
# tori


class QuantumTorus:
    """Torus on the lattice ``Z^n`` with form ``Q`` and ``qhat = x^qhat_exp``."""

    def __init__(self, Q: QMatrix | Sequence[Sequence[int]], ring, qhat_exp: int = 1):
        rows = Q.entries if isinstance(Q, QMatrix) else tuple(tuple(r) for r in Q)
        self.Q = rows
        self.n = len(rows)
        self.ring = ring
        self.qhat_exp = qhat_exp
        self._sparse = [[(j, q) for j, q in enumerate(r) if q] for r in rows]

    @classmethod
    def of(cls, tri: Triangulation, ring, qhat_exp: int = 1) -> "QuantumTorus":
        return cls(quiver_matrix(tri), ring, qhat_exp)

    def same_mode(self, other: "QuantumTorus") -> bool:
        return self.ring == other.ring and self.qhat_exp == other.qhat_exp and self.Q == other.Q

    def pairing(self, a: Sequence[int], b: Sequence[int]) -> int:
        return sum(a[i] * q * b[j] for i, row in enumerate(self._sparse) if a[i] for j, q in row)

    def qhat(self, e: int):
        return self.ring.xpow(self.qhat_exp * e)

    def monomial(self, k: Sequence[int], c=None) -> "TorusElement":
        if len(k) != self.n:
            raise ValueError(f"exponent has length {len(k)}, expected {self.n}")
        c = self.ring.one() if c is None else c
        return TorusElement(self, {tuple(int(x) for x in k): c})

    def generator(self, v: int) -> "TorusElement":
        return self.monomial(tuple(int(i == v) for i in range(self.n)))

    def one(self) -> "TorusElement":
        return self.monomial((0,) * self.n)

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})

    def element(self, terms: Mapping[Sequence[int], object]) -> "TorusElement":
        return TorusElement(self, {tuple(k): c for k, c in terms.items()})

    def from_json(self, obj: Iterable[Mapping]) -> "TorusElement":
        out = self.zero()
        for term in obj:
            out = out + self.monomial(term["k"], self.ring.from_json(term["c"]))
        return out


class TorusElement:
    __slots__ = ("torus", "terms")

    def __init__(self, torus: QuantumTorus, terms: Mapping[Vector, object]):
        self.torus = torus
        ring = torus.ring
        self.terms = {k: c for k, c in terms.items() if not ring.is_zero(c)}

    def _check(self, other: "TorusElement") -> None:
        if not self.torus.same_mode(other.torus):
            raise ScalarModeMismatch("elements live in different tori")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        ring = self.torus.ring
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = ring.add(out[k], c) if k in out else c
        return TorusElement(self.torus, out)

    def __neg__(self) -> "TorusElement":
        ring = self.torus.ring
        return TorusElement(self.torus, {k: ring.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def scale(self, c) -> "TorusElement":
        ring = self.torus.ring
        return TorusElement(self.torus, {k: ring.mul(c, v) for k, v in self.terms.items()})

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        T, ring = self.torus, self.torus.ring
        out: dict[Vector, object] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                c = ring.mul(ring.mul(ca, cb), T.qhat(T.pairing(a, b)))
                out[k] = ring.add(out[k], c) if k in out else c
        return TorusElement(T, out)

    def __pow__(self, n: int) -> "TorusElement":
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            ((k, c),) = self.terms.items()
            if c != self.torus.ring.one():
                raise ValueError("only monomials with unit scalar 1 are inverted here")
            return self.torus.monomial(tuple(-x for x in k)) ** (-n)
        out = self.torus.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.torus.same_mode(other.torus) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Vector]:
        return sorted(self.terms, key=degree_key)

    def __repr__(self) -> str:
        return f"TorusElement({len(self.terms)} terms)"

    def to_json(self) -> list[dict]:
        ring = self.torus.ring
        return [{"k": list(k), "c": ring.to_json(self.terms[k])} for k in self.support()]


def pairing(tri: Triangulation, a: Sequence[int], b: Sequence[int]) -> int:
    Q = quiver_matrix(tri).entries
    return sum(a[i] * Q[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if Q[i][j])


def mul(u: TorusElement, v: TorusElement) -> TorusElement:
    return u * v


def leading_term(u: TorusElement) -> tuple[Vector, object]:
    if u.is_zero():
        raise ZeroElement("the zero element has no leading term")
    k = max(u.terms, key=degree_key)
    return k, u.terms[k]


def degree(u: TorusElement) -> Vector:
    return leading_term(u)[0]


# ---------------------------------------------------------------------------
# Frobenius and splitting


def eta_torus(tri: Triangulation, rd: RootData) -> QuantumTorus:
    """Source torus of the Frobenius map: ``qhat = omega_hat^(N^2)``."""
    return QuantumTorus.of(tri, cyclotomic_ring(rd.M), rd.N * rd.N)


def omega_torus(tri: Triangulation, rd: RootData) -> QuantumTorus:
    return QuantumTorus.of(tri, cyclotomic_ring(rd.M), 1)


def _check_eta(u: TorusElement, rd: RootData, N: int) -> None:
    ring = u.torus.ring
    if not isinstance(ring, CyclotomicRing) or ring.M != rd.M:
        raise OrderMismatch(f"element is not over the order-{rd.M} cyclotomic ring")
    if (u.torus.qhat_exp - N * N) % ring.period:
        raise OrderMismatch("source torus must use qhat = omega_hat^(N^2)")


def frobenius_F(u: TorusElement, rd: RootData, N: int | None = None) -> TorusElement:
    """``F(c x^k) = c x^(N k)`` from the eta-torus into the omega-torus.

    ``N`` defaults to ``rd.N``; passing a different value builds a deliberately
    inconsistent map for negative tests.
    """
    N = rd.N if N is None else N
    _check_eta(u, rd, N)
    T = u.torus
    target = QuantumTorus(T.Q, T.ring, 1)
    return TorusElement(target, {tuple(N * x for x in k): c for k, c in u.terms.items()})


def frobenius_by_generators(u: TorusElement, rd: RootData, N: int | None = None) -> TorusElement:
    """Independent evaluation of ``F``: expand each Weyl monomial as an ordered
    product of generator powers, send ``x_v`` to ``x_v^N`` and multiply out."""
    N = rd.N if N is None else N
    _check_eta(u, rd, N)
    T = u.torus
    target = QuantumTorus(T.Q, T.ring, 1)
    ring = T.ring
    out = target.zero()
    for k, c in u.terms.items():
        # x^k = qhat^(-sum_{i<j} k_i k_j Q_ij) x_1^k_1 ... x_n^k_n
        norm = sum(k[i] * k[j] * T.Q[i][j] for i in range(T.n) for j in range(i + 1, T.n) if k[i] and k[j])
        term = target.monomial((0,) * T.n, ring.mul(c, T.qhat(-norm)))
        for v in range(T.n):
            if k[v]:
                gen_image = target.monomial(tuple(N * int(i == v) for i in range(T.n)))
                term = term * gen_image ** k[v]
        out = out + term
    return out


@dataclass(frozen=True)
class Splitting:
    glued: Triangulation
    cut: Triangulation
    edge: int
    lift: tuple[tuple[int, ...], ...]

    def lift_vector(self, k: Sequence[int]) -> Vector:
        out = [0] * self.cut.n_vertices
        for v, pre in enumerate(self.lift):
            for w in pre:
                out[w] += k[v]
        return tuple(out)


def splitting(tri: Triangulation, e: int) -> Splitting:
    cut, lift = cut_along_edge(tri, e)
    return Splitting(tri, cut, e, tuple(lift))


def splitting_S(sp: Splitting, u: TorusElement) -> TorusElement:
    """``x_v -> x_v`` off the edge; an edge vertex goes to the Weyl-ordered
    product of its two preimages.  On monomials ``x^k -> x^(lift k)``."""
    T = u.torus
    target = QuantumTorus(quiver_matrix(sp.cut), T.ring, T.qhat_exp)
    return TorusElement(target, {sp.lift_vector(k): c for k, c in u.terms.items()})
