"""Associated-graded model: webs are represented by their cone coordinates.

The product of two basis webs has leading term ``qhat^<a,b> x^(a+b)``, so all
centre and rank questions reduce to arithmetic on cone vectors and the form
``Q``.  Root-of-unity statements are parametrized by :class:`RootData`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cone import Vector, add, in_cone, peripheral_decompose, peripheral_vectors, scale
from .errors import DivisibilityViolation, NotInCone
from .qtorus import QuantumTorus, RootData, TorusElement
from .surface import Triangulation, quiver_matrix


def _pair(tri: Triangulation, a: Sequence[int], b: Sequence[int]) -> int:
    Q = quiver_matrix(tri).entries
    return sum(a[i] * Q[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if Q[i][j])


def _require_cone(tri: Triangulation, *vecs: Sequence[int]) -> None:
    for v in vecs:
        if not in_cone(tri, v):
            raise NotInCone(f"{tuple(v)} is not a cone point")


@functools.lru_cache(maxsize=64)
def _balanced_basis(tri: Triangulation) -> tuple[Vector, ...]:
    from .rank import balanced_lattice

    return balanced_lattice(tri).basis


def graded_product(tri: Triangulation, a: Sequence[int], b: Sequence[int]) -> tuple[int, Vector]:
    """Leading-term datum of a product of basis webs: ``(<a,b>, a+b)``."""
    _require_cone(tri, a, b)
    return _pair(tri, a, b), add(a, b)


def graded_element(torus: QuantumTorus, tri: Triangulation, terms: Mapping[Sequence[int], object]) -> TorusElement:
    """Torus element whose support is checked to lie in the cone."""
    _require_cone(tri, *terms)
    return torus.element(terms)


def i3(tri: Triangulation, a: Sequence[int], b: Sequence[int]) -> int:
    """Mod-3 intersection pairing ``(<a,b>/6) mod 3``."""
    p = _pair(tri, a, b)
    if p % 6:
        raise DivisibilityViolation(f"pairing {p} of cone points is not divisible by 6")
    return (p // 6) % 3


def in_congruent_B3(tri: Triangulation, k: Sequence[int]) -> bool:
    """``<k, b> == 0 (mod 18)`` for every ``b`` in a basis of the balanced lattice."""
    return all(_pair(tri, k, b) % 18 == 0 for b in _balanced_basis(tri))


def graded_frobenius(k: Sequence[int], rd: RootData) -> Vector:
    return scale(rd.N, k)


def is_graded_central(tri: Triangulation, k: Sequence[int], rd: RootData | None = None) -> bool:
    """Whether the web with coordinates ``k`` is central in the graded model.

    Generic ``qhat`` (``rd is None``): ``k Q = 0``.  At a root of unity the
    commutation scalar ``qhat^(2<k,b>)`` must be 1, i.e. ``<k,b> == 0 mod M``,
    tested on a basis of the balanced lattice.
    """
    if rd is None:
        Q = quiver_matrix(tri).entries
        n = len(k)
        return all(sum(k[i] * Q[i][j] for i in range(n)) == 0 for j in range(n))
    return all(_pair(tri, k, b) % rd.M == 0 for b in _balanced_basis(tri))


def in_Gamma_omega(tri: Triangulation, k: Sequence[int], rd: RootData) -> bool:
    """Membership in ``N Gamma + peripherals`` (``N Gamma_3 + peripherals`` when ``3 | N'``)."""
    core, _ = peripheral_decompose(tri, k)
    N = rd.N
    if any(c % N for c in core):
        return False
    red = tuple(c // N for c in core)
    if not in_cone(tri, red):
        return False
    return not rd.div3 or in_congruent_B3(tri, red)


@dataclass(frozen=True)
class CentralDegree:
    k: Vector
    peripheral_part: Vector
    core_over_N: Vector | None
    congruent: bool | None

    def to_json(self) -> dict:
        return {
            "k": list(self.k),
            "peripheral_part": list(self.peripheral_part),
            "core_over_N": None if self.core_over_N is None else list(self.core_over_N),
            "congruent": self.congruent,
        }


def describe_central(tri: Triangulation, k: Sequence[int], rd: RootData) -> CentralDegree:
    core, peri = peripheral_decompose(tri, k)
    red = None
    cong = None
    if not any(c % rd.N for c in core):
        red = tuple(c // rd.N for c in core)
        cong = in_congruent_B3(tri, red) if in_cone(tri, red) else None
    return CentralDegree(tuple(k), peri, red, cong)


def peripheral_span(tri: Triangulation, cap: int) -> set[Vector]:
    """``N``-combinations of peripheral vectors with coordinate sum ``<= cap``."""
    vecs = peripheral_vectors(tri)
    n = tri.n_vertices
    sums = [sum(v) for v in vecs]
    out: set[Vector] = set()

    def rec(i: int, cur: tuple[int, ...], left: int) -> None:
        if i == len(vecs):
            out.add(cur)
            return
        m = 0
        while m * sums[i] <= left:
            rec(i + 1, tuple(c + m * x for c, x in zip(cur, vecs[i])), left - m * sums[i])
            m += 1
            if sums[i] == 0:
                break

    rec(0, (0,) * n, cap)
    return out


def congruence_report(tri: Triangulation, points: Iterable[Sequence[int]]) -> dict:
    """Compare the mod-18 congruence with divisibility by 3 on given cone points.

    Reported only: whether the two conditions agree is left open.
    """
    both = only_cong = only_triple = neither = 0
    for k in points:
        c = in_congruent_B3(tri, k)
        t = all(x % 3 == 0 for x in k)
        if c and t:
            both += 1
        elif c:
            only_cong += 1
        elif t:
            only_triple += 1
        else:
            neither += 1
    return {"both": both, "congruent_only": only_cong, "triple_only": only_triple, "neither": neither}

