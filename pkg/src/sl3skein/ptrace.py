"""Quantum trace of stated corner arcs in a single triangle.

The triangle is cut into nine small triangles.  Its seven quiver points are
the two third-points on each side and the centre.  The network has one node
per small triangle and one per boundary segment, joined by 18 edges.  A corner
arc at corner ``p`` with states ``(i, j)`` traces to a sum over directed
network paths from the ``i``-th segment on the side leaving ``p`` to the
``j``-th segment on the side entering ``p``.  Segments are numbered outward
from ``p``.  Each path ``g`` contributes ``x^(3 k_g - kk)``, where ``k_g``
marks the quiver points on its left and ``kk`` sums ``k_g`` over the
diagonal paths.

:func:`search_network` recovers the path data by brute force over network
orientations, keeping the one that meets the structural requirements
(path counts, left sets of the short paths, balancedness and the pairing 18
between the two ``(3,2)`` paths).  The shipped dataset is its output
and is certified by :func:`validate_network`.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Sequence

from .cone import in_balanced
from .errors import InvalidNetwork
from .qtorus import LaurentRing, QuantumTorus, RootData, TorusElement, eta_torus, frobenius_F, omega_torus
from .surface import Triangulation, quiver_matrix, single_triangle

Vector = tuple[int, ...]
Key = tuple[int, int, int]  # (corner, i, j) with i, j in 1..3

EXPECTED_COUNTS = {(i, j): (0 if i < j else 2 if (i, j) == (3, 2) else 1) for i in range(1, 4) for j in range(1, 4)}


def _triangle() -> Triangulation:
    return single_triangle()


def rotate_vector(k: Sequence[int], c: int) -> Vector:
    """Rotate quiver data by ``c`` steps: side ``s`` goes to side ``s + c``."""
    tri = _triangle()
    out = [0] * tri.n_vertices
    for s in range(3):
        for j in range(2):
            out[tri.side_vertex(0, (s + c) % 3, j)] = k[tri.side_vertex(0, s, j)]
    out[tri.interior_vertex(0)] = k[tri.interior_vertex(0)]
    return tuple(out)


@dataclass(frozen=True)
class TriangleNetwork:
    paths: Mapping[Key, tuple[Vector, ...]]

    def aggregate(self, p: int) -> Vector:
        """``kk`` at corner ``p``: the sum of all diagonal path vectors."""
        n = _triangle().n_vertices
        out = [0] * n
        for i in range(1, 4):
            for k in self.paths.get((p, i, i), ()):
                out = [a + b for a, b in zip(out, k)]
        return tuple(out)

    def exponents(self, p: int, i: int, j: int) -> list[Vector]:
        kk = self.aggregate(p)
        return [tuple(3 * a - b for a, b in zip(k, kk)) for k in self.paths.get((p, i, j), ())]

    def to_json(self) -> dict:
        return {
            "paths": {
                f"{p},{i},{j}": [list(k) for k in self.paths[(p, i, j)]]
                for p, i, j in sorted(self.paths)
            }
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TriangleNetwork":
        try:
            raw = obj["paths"]
            paths = {}
            for key, vecs in raw.items():
                p, i, j = (int(x) for x in key.split(","))
                paths[(p, i, j)] = tuple(tuple(int(a) for a in k) for k in vecs)
        except (KeyError, ValueError, AttributeError, TypeError) as exc:
            raise InvalidNetwork(f"malformed network data: {exc}") from exc
        return cls(paths)


def dumps_network(net: TriangleNetwork) -> str:
    """Deterministic JSON with one ``"p,i,j"`` entry per line."""
    items = net.to_json()["paths"]
    lines = [f"    {json.dumps(key)}: {json.dumps(vecs)}" for key, vecs in items.items()]
    return '{\n  "paths": {\n' + ",\n".join(lines) + "\n  }\n}\n"


def default_network() -> TriangleNetwork:
    text = resources.files("sl3skein").joinpath("data/p3_network.json").read_text()
    return TriangleNetwork.from_json(json.loads(text))


def load_network(path: str) -> TriangleNetwork:
    with open(path) as fh:
        return TriangleNetwork.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# validation


def validate_network(net: TriangleNetwork) -> dict:
    """Check every structural requirement; failures name the violated clause."""
    tri = _triangle()
    Q = quiver_matrix(tri).entries
    n = tri.n_vertices
    failures: list[dict] = []

    def fail(clause: str, p: int, i: int | None = None, j: int | None = None, **extra) -> None:
        failures.append({"clause": clause, "corner": p, "i": i, "j": j} | extra)

    for p in range(3):
        for (i, j), want in EXPECTED_COUNTS.items():
            got = len(net.paths.get((p, i, j), ()))
            if got != want:
                fail("path_count", p, i, j, expected=want, found=got)
        for (i, j) in EXPECTED_COUNTS:
            for k in net.paths.get((p, i, j), ()):
                if len(k) != n or any(a not in (0, 1) for a in k):
                    fail("left_set_shape", p, i, j, vector=list(k))
        if any(f["corner"] == p for f in failures):
            continue
        for (i, j) in EXPECTED_COUNTS:
            for t in net.exponents(p, i, j):
                if not in_balanced(tri, t):
                    fail("balanced", p, i, j, exponent=list(t))
        pair_paths = net.paths[(p, 3, 2)]
        if len(pair_paths) == 2:
            g1, g2 = sorted(pair_paths, key=sum)
            kk = net.aggregate(p)
            t1 = [3 * a - b for a, b in zip(g1, kk)]
            t2 = [3 * a - b for a, b in zip(g2, kk)]
            form = sum(t1[a] * Q[a][b] * t2[b] for a in range(n) for b in range(n))
            if form != 18:
                fail("pairing_18", p, 3, 2, found=form)
    extra = sorted(k for k in net.paths if k[0] not in range(3) or (k[1], k[2]) not in EXPECTED_COUNTS)
    for k in extra:
        fail("unknown_key", k[0], k[1], k[2])
    return {"pass": not failures, "failures": failures}


def _require_valid(net: TriangleNetwork) -> None:
    report = validate_network(net)
    if not report["pass"]:
        clauses = sorted({f["clause"] for f in report["failures"]})
        raise InvalidNetwork("network fails: " + ", ".join(clauses))


# ---------------------------------------------------------------------------
# traces and Frobenius compatibility


def corner_arc_trace(
    net: TriangleNetwork, p: int, i: int, j: int, torus: QuantumTorus | None = None, validate: bool = True
) -> TorusElement:
    """``sum over paths g of x^(3 k_g - kk)`` in ``torus`` (generic by default)."""
    if validate:
        _require_valid(net)
    T = torus or QuantumTorus(quiver_matrix(_triangle()), LaurentRing())
    out = T.zero()
    for t in net.exponents(p, i, j):
        out = out + T.monomial(t)
    return out


def frobenius_compat_p3(net: TriangleNetwork, rd: RootData, N: int | None = None) -> dict:
    """``F(tr(a_ij)) == tr(a_ij)^N`` for every corner and state pair.

    The trace on the left lives in the eta-torus, the power on the right in
    the omega-torus.  ``N`` overrides the Frobenius exponent for negative tests.
    """
    _require_valid(net)
    N = rd.N if N is None else N
    tri = _triangle()
    src = eta_torus(tri, rd) if N == rd.N else QuantumTorus(quiver_matrix(tri), eta_torus(tri, rd).ring, N * N)
    dst = omega_torus(tri, rd)
    cases = []
    for p in range(3):
        for i in range(1, 4):
            for j in range(1, 4):
                lhs = frobenius_F(corner_arc_trace(net, p, i, j, src, validate=False), rd, N)
                rhs = corner_arc_trace(net, p, i, j, dst, validate=False) ** N
                cases.append({"corner": p, "i": i, "j": j, "ok": lhs == rhs})
    return {"pass": all(c["ok"] for c in cases), "M": rd.M, "N": N, "cases": cases}


# ---------------------------------------------------------------------------
# recovering the path data from the subdivided triangle

_CORNERS = ((0.0, 0.0), (3.0, 0.0), (1.5, 1.5 * math.sqrt(3)))


def _grid(i: int, j: int) -> tuple[float, float]:
    (x0, y0), (x1, y1), (x2, y2) = _CORNERS
    return (x0 + (i * (x1 - x0) + j * (x2 - x0)) / 3, y0 + (i * (y1 - y0) + j * (y2 - y0)) / 3)


def _geometry():
    """Quiver points, network nodes and the 18 network edges."""
    tri = _triangle()
    quiver = {}
    for s in range(3):
        a, b = _CORNERS[s], _CORNERS[(s + 1) % 3]
        for j in range(2):
            f = (j + 1) / 3
            quiver[tri.side_vertex(0, s, j)] = (a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f)
    quiver[tri.interior_vertex(0)] = _grid(1, 1)

    small = [((i, j), (i + 1, j), (i, j + 1)) for i in range(3) for j in range(3 - i)]
    small += [((i + 1, j), (i, j + 1), (i + 1, j + 1)) for i in range(2) for j in range(2 - i)]

    def sides_of(g):
        i, j = g
        return {s for s, ok in ((0, j == 0), (1, i + j == 3), (2, i == 0)) if ok}

    nodes, edges = {}, []
    for ti, t in enumerate(small):
        pts = [_grid(*g) for g in t]
        nodes[("T", ti)] = (sum(x for x, _ in pts) / 3, sum(y for _, y in pts) / 3)
    for ti, t in enumerate(small):
        for a, b in itertools.combinations(t, 2):
            other = [tj for tj, u in enumerate(small) if tj != ti and a in u and b in u]
            if other:
                if ti < other[0]:
                    edges.append((("T", ti), ("T", other[0])))
                continue
            (s,) = sides_of(a) & sides_of(b)
            pa, pb = _grid(*a), _grid(*b)
            mid = ((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2)
            seg = int(math.dist(_CORNERS[s], mid))  # segment index from the side's start
            nodes[("B", s, seg)] = mid
            edges.append((("B", s, seg), ("T", ti)))
    return quiver, nodes, edges


def _inside(pt, poly) -> bool:
    x, y = pt
    inside = False
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        if (y1 > y) != (y2 > y) and x < x1 + (y - y1) * (x2 - x1) / (y2 - y1):
            inside = not inside
    return inside


def _signed_area(poly) -> float:
    return sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1])) / 2


def _left_vector(path, corner: int, quiver, nodes) -> Vector:
    """Quiver points left of ``path``; it splits off the region containing ``corner``."""
    poly = [nodes[x] for x in path] + [_CORNERS[corner]]
    ccw = _signed_area(poly) > 0
    cx = sum(x for x, _ in _CORNERS) / 3
    cy = sum(y for _, y in _CORNERS) / 3
    out = [0] * len(quiver)
    for v, (x, y) in quiver.items():
        # side points sit on the closing boundary; nudge them inward
        probe = (x + (cx - x) * 1e-3, y + (cy - y) * 1e-3)
        out[v] = int(_inside(probe, poly) == ccw)
    return tuple(out)


def _simple_paths(adj, src, dst) -> list[tuple]:
    out = []

    def rec(node, acc):
        if node == dst:
            out.append(tuple(acc))
            return
        for nxt in adj.get(node, ()):
            if nxt not in acc:
                rec(nxt, acc + [nxt])

    rec(src, [src])
    return out


def _acyclic(adj) -> bool:
    state: dict = {}

    def dfs(node) -> bool:
        state[node] = 1
        for nxt in adj.get(node, ()):
            if state.get(nxt) == 1 or (nxt not in state and not dfs(nxt)):
                return False
        state[node] = 2
        return True

    return all(dfs(x) for x in list(adj) if x not in state)


def search_network(corner: int = 0) -> list[dict[tuple[int, int], tuple[Vector, ...]]]:
    """All path-data solutions at ``corner`` over acyclic network orientations.

    Boundary nodes on the side leaving ``corner`` are sources and those on the
    side entering it are sinks; both sides are tried in either order and with
    either role.  Distinct solutions are returned, deduplicated.
    """
    tri = _triangle()
    Q = quiver_matrix(tri).entries
    n = tri.n_vertices
    quiver, nodes, edges = _geometry()
    internal = [e for e in edges if e[0][0] == "T"]
    boundary = [e for e in edges if e[0][0] == "B"]
    adjacent = ((corner - 1) % 3, corner)  # side entering, side leaving
    found: list = []
    for role in (0, 1):
        src_side, dst_side = adjacent[role], adjacent[1 - role]
        third = 3 - src_side - dst_side
        loose = [e for e in boundary if e[0][1] == third]
        for src_rev, dst_rev in itertools.product((0, 1), repeat=2):
            srcs = [("B", src_side, m) for m in (range(2, -1, -1) if src_rev else range(3))]
            dsts = [("B", dst_side, m) for m in (range(2, -1, -1) if dst_rev else range(3))]
            for bits in itertools.product((0, 1), repeat=len(internal) + len(loose)):
                adj: dict = {}
                for e, bit in zip(internal + loose, bits):
                    u, v = e[::-1] if bit else e
                    adj.setdefault(u, []).append(v)
                for b, t in boundary:
                    if b[1] == src_side:
                        adj.setdefault(b, []).append(t)
                    elif b[1] == dst_side:
                        adj.setdefault(t, []).append(b)
                if not _acyclic(adj):
                    continue
                sol = _check_candidate(adj, srcs, dsts, corner, quiver, nodes, Q, n, tri)
                if sol is not None and sol not in found:
                    found.append(sol)
    return found


def _check_candidate(adj, srcs, dsts, corner, quiver, nodes, Q, n, tri):
    paths = {}
    for (i, j), want in EXPECTED_COUNTS.items():
        ps = _simple_paths(adj, srcs[i - 1], dsts[j - 1])
        if len(ps) != want:
            return None
        paths[(i, j)] = ps
    left = {ij: tuple(sorted(_left_vector(p, corner, quiver, nodes) for p in ps)) for ij, ps in paths.items()}
    if any(left[(1, 1)][0]):
        return None
    # the single path from the second source to the first sink encloses only
    # the side point between the first two sources
    between = tri.side_vertex(0, srcs[0][1], max(srcs[0][2], srcs[1][2]) - 1)
    (g21,) = left[(2, 1)]
    if sum(g21) != 1 or not g21[between]:
        return None
    if sum(left[(2, 2)][0]) != 2:
        return None
    kk = [sum(left[(i, i)][0][v] for i in range(1, 4)) for v in range(n)]
    if not in_balanced(tri, [-a for a in kk]):
        return None
    g1, g2 = sorted(left[(3, 2)], key=sum)
    if sum(g2) != sum(g1) + 1:
        return None
    t1 = [3 * a - b for a, b in zip(g1, kk)]
    t2 = [3 * a - b for a, b in zip(g2, kk)]
    if sum(t1[a] * Q[a][b] * t2[b] for a in range(n) for b in range(n)) != 18:
        return None
    return left


def derive_network() -> TriangleNetwork:
    """Unique corner-0 solution, rotated to the other two corners."""
    sols = search_network(0)
    if len(sols) != 1:
        raise InvalidNetwork(f"expected a unique network solution, found {len(sols)}")
    (base,) = sols
    paths = {}
    for c in range(3):
        for (i, j), vecs in base.items():
            paths[(c, i, j)] = tuple(sorted(rotate_vector(k, c) for k in vecs))
    return TriangleNetwork(paths)
