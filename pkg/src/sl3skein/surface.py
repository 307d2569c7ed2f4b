"""Ideal triangulations of punctured surfaces and their quiver matrices.

Conventions used everywhere in the package:

* Triangle sides are numbered 0, 1, 2 counterclockwise.  Side ``i`` runs
  from ideal point ``P_i`` to ``P_{i+1}``.
* Corner ``j`` sits at ``P_{j+2}``, the end of side ``j+1`` and the start of
  side ``j+2`` (so corner ``j`` is opposite side ``j``).
* On side ``i`` the two quiver vertices ``(v_{i1}, v_{i2})`` are listed along
  the counterclockwise boundary, so ``v_{i2}`` is nearer the end of the side.
  A neighbouring triangle sees the same two vertices with labels swapped.
* Global vertex order: edges ascending, each edge contributing its two
  vertices in the orientation of its first incidence, then one interior
  vertex per triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConventionError, EdgeNotCuttable, NotTriangulable

Side = tuple[int, int]
Corner = tuple[int, int]


@dataclass(frozen=True)
class SurfaceSpec:
    genus: int
    punctures: int

    def __post_init__(self) -> None:
        if self.genus < 0 or self.punctures < 0:
            raise NotTriangulable("genus and punctures must be nonnegative")

    @property
    def triangulable(self) -> bool:
        return self.punctures >= 1 and not (self.genus == 0 and self.punctures < 3)

    @property
    def n_triangles(self) -> int:
        return 4 * self.genus - 4 + 2 * self.punctures

    @property
    def n_edges(self) -> int:
        return 6 * self.genus - 6 + 3 * self.punctures

    @property
    def n_vertices(self) -> int:
        return 16 * self.genus - 16 + 8 * self.punctures


@dataclass(frozen=True)
class Edge:
    first: Side
    second: Side | None  # None on a boundary edge

    @property
    def is_boundary(self) -> bool:
        return self.second is None


@dataclass(frozen=True)
class Triangulation:
    """Triangles glued along sides; unglued sides are boundary edges.

    ``gluings`` holds ``(t, s, t2, s2)`` quadruples, each side at most once.
    """

    n_triangles: int
    gluings: tuple[tuple[int, int, int, int], ...]
    edges: tuple[Edge, ...] = field(init=False, repr=False)
    corner_cycles: tuple[tuple[Corner, ...], ...] = field(init=False, repr=False)
    _glue: Mapping[Side, Side] = field(init=False, repr=False, compare=False)
    _edge_of: Mapping[Side, tuple[int, bool]] = field(init=False, repr=False, compare=False)
    _closed_cycle: tuple[bool, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_triangles < 1:
            raise NotTriangulable("need at least one triangle")
        glue: dict[Side, Side] = {}
        normalized = []
        for t, s, t2, s2 in self.gluings:
            a, b = (t, s), (t2, s2)
            for x in (a, b):
                if not (0 <= x[0] < self.n_triangles and 0 <= x[1] < 3):
                    raise NotTriangulable(f"side {x} out of range")
                if x in glue:
                    raise NotTriangulable(f"side {x} glued twice")
            if t == t2:
                raise NotTriangulable(f"triangle {t} glued to itself (self-folded)")
            glue[a], glue[b] = b, a
            normalized.append(a + b if a < b else b + a)
        object.__setattr__(self, "gluings", tuple(sorted(normalized)))
        object.__setattr__(self, "_glue", glue)

        edges: list[Edge] = []
        edge_of: dict[Side, tuple[int, bool]] = {}
        for t in range(self.n_triangles):
            for s in range(3):
                if (t, s) in edge_of:
                    continue
                other = glue.get((t, s))
                edge_of[(t, s)] = (len(edges), False)
                if other is not None:
                    edge_of[other] = (len(edges), True)
                edges.append(Edge((t, s), other))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_edge_of", edge_of)
        cycles, closed = self._trace_corners()
        object.__setattr__(self, "corner_cycles", cycles)
        object.__setattr__(self, "_closed_cycle", closed)

    # -- corners -------------------------------------------------------
    def next_corner(self, c: Corner) -> Corner | None:
        """Cross the side leaving corner ``c`` at its start."""
        t, j = c
        other = self._glue.get((t, (j + 2) % 3))
        if other is None:
            return None
        return (other[0], (other[1] + 2) % 3)

    def prev_corner(self, c: Corner) -> Corner | None:
        t, j = c
        other = self._glue.get((t, (j + 1) % 3))
        if other is None:
            return None
        return (other[0], (other[1] + 1) % 3)

    def _trace_corners(self):
        seen: set[Corner] = set()
        cycles, closed = [], []
        for t in range(self.n_triangles):
            for j in range(3):
                if (t, j) in seen:
                    continue
                # walk back to the start of an open chain, if any
                start, cur = (t, j), (t, j)
                is_closed = True
                while True:
                    p = self.prev_corner(cur)
                    if p is None:
                        start, is_closed = cur, False
                        break
                    if p == (t, j):
                        break
                    cur = p
                chain = [start]
                cur = self.next_corner(start)
                while cur is not None and cur != start:
                    chain.append(cur)
                    cur = self.next_corner(cur)
                if is_closed:
                    k = chain.index(min(chain))
                    chain = chain[k:] + chain[:k]
                seen.update(chain)
                cycles.append(tuple(chain))
                closed.append(is_closed)
        order = sorted(range(len(cycles)), key=lambda i: min(cycles[i]))
        return tuple(cycles[i] for i in order), tuple(closed[i] for i in order)

    # -- counts ----------------------------------------------------------
    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return 2 * self.n_edges + self.n_triangles

    @property
    def is_closed(self) -> bool:
        return all(e.second is not None for e in self.edges)

    @property
    def punctures(self) -> int:
        return len(self.corner_cycles)

    @property
    def genus(self) -> int | None:
        if not self.is_closed:
            return None
        g4 = self.n_triangles + 4 - 2 * self.punctures
        return g4 // 4 if g4 % 4 == 0 else None

    @property
    def spec(self) -> SurfaceSpec | None:
        g = self.genus
        return None if g is None else SurfaceSpec(g, self.punctures)

    # -- vertices ----------------------------------------------------------
    def glued_to(self, t: int, s: int) -> Side | None:
        return self._glue.get((t, s))

    def edge_index(self, t: int, s: int) -> int:
        return self._edge_of[(t, s)][0]

    def is_boundary(self, t: int, s: int) -> bool:
        return (t, s) not in self._glue

    def side_vertex(self, t: int, s: int, j: int) -> int:
        """Global index of ``v_{s,j}`` (``j`` in {0, 1}) of triangle ``t``."""
        e, flipped = self._edge_of[(t, s)]
        return 2 * e + (1 - j if flipped else j)

    def interior_vertex(self, t: int) -> int:
        return 2 * self.n_edges + t

    def local_vertices(self, t: int) -> tuple[int, ...]:
        """``(v11, v12, v21, v22, v31, v32, v_t)`` as global indices."""
        out = [self.side_vertex(t, s, j) for s in range(3) for j in range(2)]
        out.append(self.interior_vertex(t))
        return tuple(out)

    def vertex_ids(self) -> list[str]:
        ids = [f"e{e}.{j + 1}" for e in range(self.n_edges) for j in range(2)]
        ids += [f"t{t}" for t in range(self.n_triangles)]
        return ids

    def to_json(self) -> dict:
        return {"triangles": self.n_triangles, "gluings": [list(g) for g in self.gluings]}


# ---------------------------------------------------------------------------
# construction


class _Builder:
    """Mutable scratch triangulation: triangles as ideal-point triples."""

    def __init__(self, tris: list[tuple[int, int, int]], glue: dict[Side, Side]):
        self.tris = tris
        self.glue = glue

    def _set(self, a: Side, b: Side) -> None:
        self.glue[a], self.glue[b] = b, a

    def _move(self, old: Side, new: Side) -> None:
        other = self.glue.pop(old)
        self._set(new, other)

    def split_face(self, t: int, label: int) -> None:
        a, b, c = self.tris[t]
        t1, t2 = len(self.tris), len(self.tris) + 1
        self.tris[t] = (a, b, label)
        self.tris += [(b, c, label), (c, a, label)]
        self._move((t, 1), (t1, 0))
        self._move((t, 2), (t2, 0))
        self._set((t, 1), (t1, 2))
        self._set((t1, 1), (t2, 2))
        self._set((t2, 1), (t, 2))

    def split_edge(self, t: int, s: int, label: int) -> None:
        u, us = self.glue[(t, s)]
        if u == t:
            raise NotTriangulable("cannot split an edge glued within one triangle")
        a, b, c = (self.tris[t][(s + k) % 3] for k in range(3))
        d = self.tris[u][(us + 2) % 3]
        n0 = len(self.tris)
        # t -> (a,P,c), n0 -> (P,b,c), u -> (b,P,d), n0+1 -> (P,a,d)
        moved = {
            (t, (s + 2) % 3): (t, 2),
            (t, (s + 1) % 3): (n0, 1),
            (u, (us + 2) % 3): (u, 2),
            (u, (us + 1) % 3): (n0 + 1, 1),
        }
        pairs = {frozenset((x, y)) for x, y in self.glue.items()}
        pairs.discard(frozenset(((t, s), (u, us))))
        touched = [p for p in pairs if p & moved.keys()]
        kept = [p for p in pairs if not p & moved.keys()]
        self.tris[t], self.tris[u] = (a, label, c), (b, label, d)
        self.tris += [(label, b, c), (label, a, d)]
        self.glue = {}
        for p in kept:
            x, y = tuple(p)
            self._set(x, y)
        for p in touched:
            x, y = tuple(p)
            self._set(moved.get(x, x), moved.get(y, y))
        self._set((t, 1), (n0, 2))
        self._set((u, 1), (n0 + 1, 2))
        self._set((t, 0), (n0 + 1, 0))
        self._set((n0, 0), (u, 0))

    def freeze(self) -> Triangulation:
        quads = {}
        for a, b in self.glue.items():
            key = min(a, b)
            quads[key] = min(a, b) + max(a, b)
        return Triangulation(len(self.tris), tuple(quads.values()))


def _base(genus: int) -> _Builder:
    if genus == 0:
        # two triangles glued along all three sides: a thrice-punctured sphere
        tris = [(0, 1, 2), (0, 2, 1)]
        b = _Builder(tris, {})
        b._set((0, 0), (1, 2))
        b._set((0, 1), (1, 1))
        b._set((0, 2), (1, 0))
        return b
    # 4g-gon with word a1 b1 a1^-1 b1^-1 ..., fan-triangulated from corner 0
    m = 4 * genus
    tris = [(0, k, k + 1) for k in range(1, m - 1)]
    b = _Builder(tris, {})

    def poly_side(k: int) -> Side:
        if k == 0:
            return (0, 0)
        if k == m - 1:
            return (m - 3, 2)
        return (k - 1, 1)

    for k in range(2, m - 1):
        b._set((k - 2, 2), (k - 1, 0))
    for j in range(genus):
        b._set(poly_side(4 * j), poly_side(4 * j + 2))
        b._set(poly_side(4 * j + 1), poly_side(4 * j + 3))
    return b


def build_canonical_triangulation(spec: SurfaceSpec, variant: str = "fan") -> Triangulation:
    """Deterministic triangulation of the surface ``spec``.

    Genus zero starts from two triangles glued along their boundary (three
    punctures); positive genus from the fan-triangulated ``4g``-gon (one
    puncture).  Extra punctures are inserted by splitting triangle 0 into
    three (``variant="fan"``) or by splitting edge 0 of the current
    triangulation (``variant="edge"``), which gives a second, combinatorially
    different triangulation of the same surface.
    """
    if not spec.triangulable:
        raise NotTriangulable(f"surface (g={spec.genus}, n={spec.punctures}) has no ideal triangulation")
    if variant not in ("fan", "edge"):
        raise ValueError(f"unknown variant {variant!r}")
    b = _base(spec.genus)
    base_n = 3 if spec.genus == 0 else 1
    label = 1000
    for _ in range(spec.punctures - base_n):
        if variant == "fan":
            b.split_face(0, label)
        else:
            b.split_edge(0, 0, label)
        label += 1
    tri = b.freeze()
    if (tri.n_triangles, tri.n_edges, tri.punctures, tri.genus) != (
        spec.n_triangles, spec.n_edges, spec.punctures, spec.genus
    ):
        raise ConventionError(f"construction produced the wrong surface for {spec}")
    return tri


def triangulation_from_json(obj: Mapping) -> Triangulation:
    if "genus" in obj:
        return build_canonical_triangulation(
            SurfaceSpec(int(obj["genus"]), int(obj["punctures"])), obj.get("variant", "fan")
        )
    tris = obj["triangles"]
    n = tris if isinstance(tris, int) else len(tris)
    return Triangulation(n, tuple(tuple(int(x) for x in g) for g in obj["gluings"]))


def single_triangle() -> Triangulation:
    """The triangle with three boundary edges."""
    return Triangulation(1, ())


def relabel_triangles(tri: Triangulation, perm: Sequence[int]) -> tuple[Triangulation, list[int]]:
    """Renumber triangle ``t`` as ``perm[t]``.

    Returns the new triangulation and the induced vertex map ``old -> new``.
    """
    quads = tuple((perm[t], s, perm[t2], s2) for t, s, t2, s2 in tri.gluings)
    new = Triangulation(tri.n_triangles, quads)
    vmap = [0] * tri.n_vertices
    for t in range(tri.n_triangles):
        for old, nv in zip(tri.local_vertices(t), new.local_vertices(perm[t])):
            vmap[old] = nv
    return new, vmap


def cut_along_edge(tri: Triangulation, e: int) -> tuple[Triangulation, list[tuple[int, ...]]]:
    """Cut along internal edge ``e``.

    Returns the cut triangulation and, for each vertex of ``tri``, the tuple
    of its preimages (two for the vertices on ``e``, one otherwise).
    """
    edge = tri.edges[e]
    if edge.second is None:
        raise EdgeNotCuttable(f"edge {e} is a boundary edge")
    drop = edge.first + edge.second
    cut = Triangulation(tri.n_triangles, tuple(g for g in tri.gluings if g != drop))
    lift: list[list[int]] = [[] for _ in range(tri.n_vertices)]
    for t in range(tri.n_triangles):
        for old, nv in zip(tri.local_vertices(t), cut.local_vertices(t)):
            if nv not in lift[old]:
                lift[old].append(nv)
    return cut, [tuple(sorted(x)) for x in lift]


# ---------------------------------------------------------------------------
# quiver


@dataclass(frozen=True)
class QMatrix:
    entries: tuple[tuple[int, ...], ...]
    vertex_ids: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.size, self.size)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertex_ids), "Q": [list(r) for r in self.entries]}


def quiver_matrix(tri: Triangulation) -> QMatrix:
    """Signed adjacency matrix, assembled column by column.

    Each triangle contributes, with ``v = v_t`` and indices mod 3:
    column ``v``: ``+2`` from each ``v_{i2}``, ``-2`` from each ``v_{i1}``;
    column ``v_{i1}``: ``+2`` from ``v``, ``-2`` from ``v_{(i+2)2}``;
    column ``v_{i2}``: ``-2`` from ``v``, ``+2`` from ``v_{(i+1)1}``.
    A boundary side adds the weight-one arrow ``v_{i1} -> v_{i2}``.
    Antisymmetry is checked afterwards, never imposed.
    """
    n = tri.n_vertices
    Q = [[0] * n for _ in range(n)]
    for t in range(tri.n_triangles):
        v = tri.interior_vertex(t)

        def sv(i: int, j: int) -> int:
            return tri.side_vertex(t, i % 3, j)

        for i in range(3):
            Q[sv(i, 1)][v] += 2
            Q[sv(i, 0)][v] -= 2
            Q[v][sv(i, 0)] += 2
            Q[sv(i + 2, 1)][sv(i, 0)] -= 2
            Q[v][sv(i, 1)] -= 2
            Q[sv(i + 1, 0)][sv(i, 1)] += 2
            if tri.is_boundary(t, i):
                Q[sv(i, 0)][sv(i, 1)] += 1
                Q[sv(i, 1)][sv(i, 0)] -= 1
    for a in range(n):
        for b in range(a, n):
            if Q[a][b] != -Q[b][a]:
                raise ConventionError(f"Q not antisymmetric at ({a}, {b})")
    return QMatrix(tuple(tuple(r) for r in Q), tuple(tri.vertex_ids()))


def puncture_corner_cycle(tri: Triangulation, p: int) -> tuple[Corner, ...]:
    if not 0 <= p < len(tri.corner_cycles):
        raise IndexError(f"puncture {p} out of range (have {len(tri.corner_cycles)})")
    return tri.corner_cycles[p]
