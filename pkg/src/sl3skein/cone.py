"""The cone of web coordinates, its balanced group, and weighted train tracks.

Per triangle the nine forms ``r_ij`` use the local order
``(v11, v12, v21, v22, v31, v32, v)`` with sides 1..3 (0..2 in code):

    r_i1 = k_{i+1,2} + k_{i+2,1} - k_v
    r_i2 = k_v + k_{i+2,2} - k_{i,1} - k_{i+2,1}
    r_i3 = k_v + k_{i+1,1} - k_{i,2} - k_{i+1,2}

A vector is in the cone when every form lies in ``3N`` and every entry is
nonnegative; it is balanced when every form lies in ``3Z``.

Train tracks.  Each corner ``c`` carries two arc components.  The ``ccw``
arc enters through side ``c+1`` and leaves through side ``c+2``; the ``cw``
arc does the opposite.  The ``ccw`` arc counts twice in ``k_v``, the ``cw``
arc once.  The trivalent component ``s`` adds its weight to every outgoing
side count when the triangle type is +1 and to every incoming count when -1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, IncompatibleWeights, NotBalanced, NotInCone
from .lattice import GE, MOD3
from .surface import Triangulation

CCW, CW = "ccw", "cw"
SENSES = (CCW, CW)

Vector = tuple[int, ...]


def _local(tri: Triangulation, t: int, k: Sequence[int]) -> list[int]:
    return [k[v] for v in tri.local_vertices(t)]


def _r_from_local(x: Sequence[int]) -> tuple[int, ...]:
    def kk(i: int, j: int) -> int:
        return x[2 * (i % 3) + j]

    v = x[6]
    out = []
    for i in range(3):
        out.append(kk(i + 1, 1) + kk(i + 2, 0) - v)
        out.append(v + kk(i + 2, 1) - kk(i, 0) - kk(i + 2, 0))
        out.append(v + kk(i + 1, 0) - kk(i, 1) - kk(i + 1, 1))
    return tuple(out)


@dataclass(frozen=True)
class LocalR:
    values: tuple[int, ...]  # r11, r12, r13, r21, ..., r33

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.values[3 * (i - 1) + (j - 1)]


def local_r(tri: Triangulation, t: int, k: Sequence[int]) -> LocalR:
    if len(k) != tri.n_vertices:
        raise ValueError(f"vector has length {len(k)}, expected {tri.n_vertices}")
    return LocalR(_r_from_local(_local(tri, t, k)))


@functools.lru_cache(maxsize=64)
def r_rows(tri: Triangulation) -> tuple[Vector, ...]:
    """The ``9T`` forms as integer row vectors on ``ZZ^V``."""
    n = tri.n_vertices
    rows = []
    for t in range(tri.n_triangles):
        loc = tri.local_vertices(t)
        for idx in range(9):
            # evaluate the form on local basis vectors to read off coefficients
            coeffs = [_r_from_local([int(a == b) for b in range(7)])[idx] for a in range(7)]
            row = [0] * n
            for a, c in zip(loc, coeffs):
                row[a] += c
            rows.append(tuple(row))
    return tuple(rows)


def in_balanced(tri: Triangulation, k: Sequence[int]) -> bool:
    return all(r % 3 == 0 for t in range(tri.n_triangles) for r in local_r(tri, t, k).values)


def in_cone(tri: Triangulation, k: Sequence[int]) -> bool:
    if len(k) != tri.n_vertices or any(x < 0 for x in k):
        return False
    return all(
        r >= 0 and r % 3 == 0 for t in range(tri.n_triangles) for r in local_r(tri, t, k).values
    )


def cone_constraints(tri: Triangulation) -> list[tuple[Vector, str, int]]:
    out: list[tuple[Vector, str, int]] = []
    for row in r_rows(tri):
        out.append((row, GE, 0))
        out.append((row, MOD3, 0))
    return out


def degree_key(a: Sequence[int]) -> tuple:
    return (sum(a), tuple(a))


def compare(a: Sequence[int], b: Sequence[int]) -> int:
    """-1, 0 or 1 as ``a`` is below, equal to or above ``b`` in degree order."""
    if len(a) != len(b):
        raise ValueError("length mismatch")
    ka, kb = degree_key(a), degree_key(b)
    return (ka > kb) - (ka < kb)


def honeycomb_degree(tri: Triangulation, t: int, k: Sequence[int]) -> int:
    x = _local(tri, t, k)
    diff = (x[1] + x[3] + x[5]) - (x[0] + x[2] + x[4])
    if diff % 3:
        raise NotBalanced(f"triangle {t}: alternating side sum {diff} is not divisible by 3")
    return diff // 3


# ---------------------------------------------------------------------------
# enumeration


def _kv_range(x: Sequence[int], left: int) -> tuple[int, int, int] | None:
    """Admissible interior values for fixed edge entries ``x[0:6]``.

    Returns ``(lo, hi, residue)``; the values are ``lo, lo+3, ..., <= hi``.
    """
    # r_i1 >= 0 bounds k_v above; r_i2, r_i3 >= 0 bound it below
    zero = list(x[:6]) + [0]
    r0 = _r_from_local(zero)
    hi, lo = left, 0
    for idx, r in enumerate(r0):
        if idx % 3 == 0:
            hi = min(hi, r)
        else:
            lo = max(lo, -r)
    res = r0[0] % 3
    if any((r - res * (1 if idx % 3 == 0 else -1)) % 3 for idx, r in enumerate(r0)):
        return None
    lo += (res - lo) % 3
    if lo > hi:
        return None
    return lo, hi, res


def cone_points(tri: Triangulation, cap: int, point_cap: int | None = None) -> list[Vector]:
    """All cone points with coordinate sum ``<= cap``, sorted by degree.

    Edge coordinates are enumerated first (with the per-edge congruence
    ``k_1 + k_2 = 0 mod 3``); interior coordinates then range over the
    arithmetic progression left open by the triangle's nine forms.
    """
    E, T = tri.n_edges, tri.n_triangles
    n = tri.n_vertices
    # the last edge index each triangle depends on
    ready: dict[int, list[int]] = {}
    for t in range(T):
        last = max(tri.edge_index(t, s) for s in range(3))
        ready.setdefault(last, []).append(t)
    out: list[Vector] = []
    k = [0] * n

    def fill_interior(ts: list[int], i: int, left: int) -> None:
        if i == len(ts):
            out.append(tuple(k))
            if point_cap is not None and len(out) > point_cap:
                raise BudgetExceeded(f"more than {point_cap} cone points with sum <= {cap}")
            return
        t = ts[i]
        rng = _kv_range(_local(tri, t, k), left)
        if rng is None:
            return
        lo, hi, _ = rng
        v = tri.interior_vertex(t)
        for val in range(lo, hi + 1, 3):
            k[v] = val
            fill_interior(ts, i + 1, left - val)
        k[v] = 0

    def rec(e: int, left: int) -> None:
        if e == E:
            fill_interior(list(range(T)), 0, left)
            return
        for a in range(left + 1):
            for b in range((-a) % 3, left - a + 1, 3):
                k[2 * e], k[2 * e + 1] = a, b
                if all(_kv_range(_local(tri, t, k), left - a - b) is not None for t in ready.get(e, [])):
                    rec(e + 1, left - a - b)
        k[2 * e] = k[2 * e + 1] = 0

    rec(0, cap)
    out.sort(key=degree_key)
    return out


def cone_count(tri: Triangulation, cap: int) -> int:
    """Number of cone points with sum ``<= cap`` without listing them."""
    E, T = tri.n_edges, tri.n_triangles
    k = [0] * tri.n_vertices
    total = 0

    def rec(e: int, left: int) -> None:
        nonlocal total
        if e == E:
            # ways[s] = number of interior assignments with interior sum s
            ways = [1] + [0] * left
            for t in range(T):
                rng = _kv_range(_local(tri, t, k), left)
                if rng is None:
                    return
                lo, hi, _ = rng
                new = [0] * (left + 1)
                for s, w in enumerate(ways):
                    if w:
                        for val in range(lo, min(hi, left - s) + 1, 3):
                            new[s + val] += w
                ways = new
            total += sum(ways)
            return
        for a in range(left + 1):
            for b in range((-a) % 3, left - a + 1, 3):
                k[2 * e], k[2 * e + 1] = a, b
                rec(e + 1, left - a - b)
        k[2 * e] = k[2 * e + 1] = 0

    rec(0, cap)
    return total


# ---------------------------------------------------------------------------
# Hilbert basis


def hilbert_basis(tri: Triangulation, budget: int = 10, point_cap: int = 2_000_000) -> list[Vector]:
    """Irreducible cone points with coordinate sum ``<= budget``.

    Points are visited by increasing sum; a point is kept when no
    previously kept generator ``g`` leaves ``x - g`` inside the cone.  The
    result generates every cone point of sum ``<= budget``; beyond the
    budget nothing is claimed.
    """
    pts = cone_points(tri, budget, point_cap=point_cap)
    cone_set = set(pts)
    gens: list[Vector] = []
    for x in pts:
        if not any(x):
            continue
        reducible = False
        for g in gens:
            d = tuple(a - b for a, b in zip(x, g))
            if min(d) >= 0 and d in cone_set:
                reducible = True
                break
        if not reducible:
            gens.append(x)
    return gens


# ---------------------------------------------------------------------------
# train tracks


@dataclass(frozen=True)
class WeightedTrainTrack:
    """Per-triangle type and weights.

    ``corners[t]`` is ``(ccw_0, cw_0, ccw_1, cw_1, ccw_2, cw_2)`` and
    ``honeycomb[t]`` the weight of the trivalent component.
    """

    types: tuple[int, ...]
    corners: tuple[tuple[int, ...], ...]
    honeycomb: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.types) == len(self.corners) == len(self.honeycomb)):
            raise ValueError("per-triangle data has inconsistent lengths")
        if any(t not in (1, -1) for t in self.types):
            raise ValueError("types must be +1 or -1")
        if any(len(c) != 6 for c in self.corners):
            raise ValueError("each triangle has six corner components")
        if any(w < 0 for c in self.corners for w in c) or any(w < 0 for w in self.honeycomb):
            raise ValueError("weights must be nonnegative")

    @classmethod
    def zero(cls, n_triangles: int) -> "WeightedTrainTrack":
        return cls((1,) * n_triangles, ((0,) * 6,) * n_triangles, (0,) * n_triangles)

    def corner_weight(self, t: int, c: int, sense: str) -> int:
        return self.corners[t][2 * c + (0 if sense == CCW else 1)]

    def normalized(self) -> "WeightedTrainTrack":
        """Type +1 wherever the trivalent weight is zero."""
        types = tuple(1 if w == 0 else e for e, w in zip(self.types, self.honeycomb))
        return WeightedTrainTrack(types, self.corners, self.honeycomb)

    def __add__(self, other: "WeightedTrainTrack") -> "WeightedTrainTrack":
        a, b = self.normalized(), other.normalized()
        types = []
        for ea, wa, eb, wb in zip(a.types, a.honeycomb, b.types, b.honeycomb):
            if wa and wb and ea != eb:
                raise IncompatibleWeights("cannot add tracks of opposite type")
            types.append(ea if wa else eb)
        return WeightedTrainTrack(
            tuple(types),
            tuple(tuple(x + y for x, y in zip(ca, cb)) for ca, cb in zip(a.corners, b.corners)),
            tuple(x + y for x, y in zip(a.honeycomb, b.honeycomb)),
        )

    def to_json(self) -> dict:
        return {
            "type": {str(t): e for t, e in enumerate(self.types)},
            "weights": {
                str(t): {"ccw": list(c[0::2]), "cw": list(c[1::2]), "s": w}
                for t, (c, w) in enumerate(zip(self.corners, self.honeycomb))
            },
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "WeightedTrainTrack":
        n = len(obj["weights"])
        types = tuple(int(obj["type"][str(t)]) for t in range(n))
        corners, hc = [], []
        for t in range(n):
            w = obj["weights"][str(t)]
            corners.append(tuple(x for pair in zip(w["ccw"], w["cw"]) for x in pair))
            hc.append(int(w["s"]))
        return cls(types, tuple(corners), tuple(hc))


def side_counts(track: WeightedTrainTrack, t: int) -> tuple[list[int], list[int]]:
    """``(e_in, e_out)`` on the three sides of triangle ``t``."""
    c = track.corners[t]
    ccw, cw = c[0::2], c[1::2]
    e_in = [ccw[(i + 2) % 3] + cw[(i + 1) % 3] for i in range(3)]
    e_out = [ccw[(i + 1) % 3] + cw[(i + 2) % 3] for i in range(3)]
    w = track.honeycomb[t]
    if track.types[t] == 1:
        e_out = [x + w for x in e_out]
    else:
        e_in = [x + w for x in e_in]
    return e_in, e_out


def _check_compatible(tri: Triangulation, track: WeightedTrainTrack) -> None:
    for e, edge in enumerate(tri.edges):
        if edge.second is None:
            continue
        (t, s), (u, r) = edge.first, edge.second
        ti, to = side_counts(track, t)
        ui, uo = side_counts(track, u)
        if ti[s] != uo[r] or to[s] != ui[r]:
            raise IncompatibleWeights(
                f"edge {e}: counts (in {ti[s]}, out {to[s]}) vs (in {ui[r]}, out {uo[r]})"
            )


def track_to_coords(tri: Triangulation, track: WeightedTrainTrack) -> Vector:
    if len(track.types) != tri.n_triangles:
        raise ValueError("track does not match the triangulation")
    _check_compatible(tri, track)
    k: list[int | None] = [None] * tri.n_vertices
    for t in range(tri.n_triangles):
        e_in, e_out = side_counts(track, t)
        c = track.corners[t]
        vals = []
        for i in range(3):
            vals += [e_out[i] + 2 * e_in[i], e_in[i] + 2 * e_out[i]]
        vals.append(2 * sum(c[0::2]) + sum(c[1::2]) + 3 * track.honeycomb[t])
        for v, x in zip(tri.local_vertices(t), vals):
            if k[v] is not None and k[v] != x:
                raise IncompatibleWeights(f"vertex {v} receives {k[v]} and {x}")
            k[v] = x
    return tuple(int(x) for x in k)  # type: ignore[arg-type]


def _solve_corners(e_in: list[int], e_out: list[int], K: int) -> tuple[int, ...] | None:
    # in_i = a_{i+2} + b_{i+1}, out_i = a_{i+1} + b_{i+2}, K = 2 sum a + sum b
    sin = sum(e_in)
    num = 2 * sin - K - 2 * (e_in[0] - e_out[1]) - (e_in[1] - e_out[2])
    if num % 3:
        return None
    b0 = num // 3
    b1 = b0 + e_in[0] - e_out[1]
    b2 = b1 + e_in[1] - e_out[2]
    b = [b0, b1, b2]
    a = [0, 0, 0]
    for i in range(3):
        a[(i + 2) % 3] = e_in[i] - b[(i + 1) % 3]
    if min(a + b) < 0:
        return None
    # the solve used five of the six side equations plus K; confirm all
    for i in range(3):
        if e_in[i] != a[(i + 2) % 3] + b[(i + 1) % 3] or e_out[i] != a[(i + 1) % 3] + b[(i + 2) % 3]:
            return None
    if 2 * sum(a) + sum(b) != K:
        return None
    return (a[0], b[0], a[1], b[1], a[2], b[2])


def coords_to_track(tri: Triangulation, k: Sequence[int]) -> WeightedTrainTrack:
    """Inverse of :func:`track_to_coords` on the cone.

    The six side equations alone leave a one-parameter family of corner
    weights (shift all ``ccw`` by ``+t`` and all ``cw`` by ``-t``); the
    interior coordinate ``k_v`` fixes ``t``.
    """
    if not in_cone(tri, k):
        raise NotInCone("vector is not in the cone")
    types, corners, hc = [], [], []
    for t in range(tri.n_triangles):
        x = _local(tri, t, k)
        d = honeycomb_degree(tri, t, k)
        eps = 1 if d >= 0 else -1
        w = abs(d)
        e_in, e_out = [], []
        for i in range(3):
            k1, k2 = x[2 * i], x[2 * i + 1]
            a, b = 2 * k1 - k2, 2 * k2 - k1
            if a % 3 or b % 3:
                raise NotInCone(f"triangle {t}, side {i}: non-integral side counts")
            e_in.append(a // 3)
            e_out.append(b // 3)
        if eps == 1:
            e_out = [v - w for v in e_out]
        else:
            e_in = [v - w for v in e_in]
        sol = _solve_corners(e_in, e_out, x[6] - 3 * w)
        if sol is None:
            raise NotInCone(f"triangle {t}: no nonnegative corner weights")
        types.append(eps)
        corners.append(sol)
        hc.append(w)
    return WeightedTrainTrack(tuple(types), tuple(corners), tuple(hc))


def peripheral_track(tri: Triangulation, p: int, sense: str) -> WeightedTrainTrack:
    if sense not in SENSES:
        raise ValueError(f"sense must be one of {SENSES}")
    if not 0 <= p < len(tri.corner_cycles):
        raise IndexError(f"puncture {p} out of range")
    corners = [[0] * 6 for _ in range(tri.n_triangles)]
    off = 0 if sense == CCW else 1
    for t, c in tri.corner_cycles[p]:
        corners[t][2 * c + off] += 1
    return WeightedTrainTrack(
        (1,) * tri.n_triangles, tuple(tuple(c) for c in corners), (0,) * tri.n_triangles
    )


def peripheral_vector(tri: Triangulation, p: int, sense: str) -> Vector:
    """Coordinates of the loop around puncture ``p`` made of ``sense`` corner arcs.

    ``sense`` names the corner-arc family, not the direction of travel
    around the puncture.
    """
    return track_to_coords(tri, peripheral_track(tri, p, sense))


def peripheral_vectors(tri: Triangulation) -> list[Vector]:
    """All ``2n`` peripheral vectors, ordered ``(p, ccw), (p, cw)`` by puncture."""
    return [peripheral_vector(tri, p, s) for p in range(tri.punctures) for s in SENSES]


def peripheral_multiplicities(tri: Triangulation, k: Sequence[int]) -> list[int]:
    """Per ``(puncture, sense)`` the minimum corner weight around the puncture."""
    track = coords_to_track(tri, k)
    return [
        min(track.corner_weight(t, c, s) for t, c in tri.corner_cycles[p])
        for p in range(tri.punctures)
        for s in SENSES
    ]


def peripheral_decompose(tri: Triangulation, k: Sequence[int]) -> tuple[Vector, Vector]:
    mult = peripheral_multiplicities(tri, k)
    peri = [0] * tri.n_vertices
    for m, vec in zip(mult, peripheral_vectors(tri)):
        if m:
            peri = [a + m * b for a, b in zip(peri, vec)]
    core = tuple(a - b for a, b in zip(k, peri))
    return core, tuple(peri)


def add(a: Iterable[int], b: Iterable[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(m: int, a: Iterable[int]) -> Vector:
    return tuple(m * x for x in a)


# ---------------------------------------------------------------------------
# run-compressed enumeration through train tracks


def _triangle_order(tri: Triangulation) -> list[int]:
    order, seen = [], set()
    for root in range(tri.n_triangles):
        if root in seen:
            continue
        queue = [root]
        seen.add(root)
        while queue:
            t = queue.pop(0)
            order.append(t)
            for s in range(3):
                o = tri.glued_to(t, s)
                if o is not None and o[0] not in seen:
                    seen.add(o[0])
                    queue.append(o[0])
    return order


_VAR_ORDER = (0, 4, 5, 1, 2, 3)  # a0, b1, b2, a1, a2, b0 (a = ccw, b = cw)


def _expand(cols: dict, counts: np.ndarray) -> dict:
    return {key: np.repeat(val, counts, axis=0) for key, val in cols.items()}


def _ranks(counts: np.ndarray) -> np.ndarray:
    """``0..c-1`` for each entry ``c`` of ``counts``, concatenated."""
    total = int(counts.sum())
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    return np.arange(total, dtype=np.int64) - starts


def _filter(cols: dict, mask: np.ndarray) -> dict:
    return {key: val[mask] for key, val in cols.items()}


def cone_run_chunks(tri: Triangulation, cap: int):
    """Cone points with sum ``<= cap`` as numpy chunks of runs.

    Yields ``(base, v, length)``: ``base`` is an ``(R, |V|)`` array and the
    ``r``-th run stands for ``base[r] + 3 t e_v``, ``t = 0 .. length[r]-1``.

    Points are produced through train tracks: triangles are visited in
    breadth-first order and each one receives corner and trivalent weights
    matching the side counts already fixed by its neighbours.  The last
    triangle has all three sides fixed, which leaves exactly one free
    parameter (shifting ``ccw`` weights up and ``cw`` weights down); its range
    becomes the run.  Closed surfaces only.
    """
    if not tri.is_closed:
        raise ValueError("run enumeration needs a closed surface")
    order = _triangle_order(tri)
    n = tri.n_vertices
    first = order[0]
    cost_w0 = 3 + 3 * 3
    for w0 in range(cap // cost_w0 + 1):
        for eps0 in ((1,) if w0 == 0 else (1, -1)):
            cols = {
                "k": np.zeros((1, n), dtype=np.int64),
                "left": np.array([cap], dtype=np.int64),
            }
            cols = _triangle_step(tri, first, cols, w_eps=(w0, eps0))
            for t in order[1:-1]:
                if not len(cols["left"]):
                    break
                cols = _triangle_step(tri, t, cols)
            if not len(cols["left"]):
                continue
            out = _last_step(tri, order[-1], cols)
            if out is not None:
                yield out


def _triangle_step(tri: Triangulation, t: int, cols: dict, w_eps=None) -> dict:
    fixed, new = {}, []
    for s in range(3):
        o = tri.glued_to(t, s)
        if o is not None and ("in", o[0], o[1]) in cols:
            # the neighbour's outgoing count is our incoming one
            fixed[s] = (("out", o[0], o[1]), ("in", o[0], o[1]))
        else:
            new.append(s)
    newset = set(new)
    crosses = [((c + 1) % 3, (c + 2) % 3) for c in range(3)]
    costs = [2 + 3 * sum(x in newset for x in crosses[c]) for c in range(3)]
    costs += [1 + 3 * sum(x in newset for x in crosses[c]) for c in range(3)]
    cost_w = 3 + 3 * len(new)

    # trivalent weight and type
    if w_eps is not None:
        w0, eps0 = w_eps
        cols = dict(cols)
        cols["w"] = np.full(len(cols["left"]), w0, dtype=np.int64)
        cols["eps"] = np.full(len(cols["left"]), eps0, dtype=np.int64)
        cols["left"] = cols["left"] - cost_w * w0
        cols = _filter(cols, cols["left"] >= 0)
    else:
        cnt = cols["left"] // cost_w + 1
        cols = _expand(cols, cnt)
        cols["w"] = _ranks(cnt)
        cols["eps"] = np.ones_like(cols["w"])
        pos = cols["w"] > 0
        neg = _filter(cols, pos)
        neg["eps"] = -neg["eps"]
        cols = {key: np.concatenate([cols[key], neg[key]]) for key in cols}
        cols["left"] = cols["left"] - cost_w * cols["w"]

    eqs = []  # (var_i, var_j, side, which)
    for i in fixed:
        eqs.append(((i + 2) % 3, 3 + (i + 1) % 3, i, 0))
        eqs.append(((i + 1) % 3, 3 + (i + 2) % 3, i, 1))

    def target(i: int, which: int, c: dict) -> np.ndarray:
        fin, fout = c[fixed[i][0]], c[fixed[i][1]]
        if which == 0:
            return fin - np.where(c["eps"] == -1, c["w"], 0)
        return fout - np.where(c["eps"] == 1, c["w"], 0)

    assigned: set[int] = set()
    for var in _VAR_ORDER:
        forced = None
        for a, b, side, which in eqs:
            if a == var and b in assigned:
                forced = (b, side, which)
                break
            if b == var and a in assigned:
                forced = (a, side, which)
                break
        if forced is not None:
            partner, side, which = forced
            val = target(side, which, cols) - cols[("var", partner)]
            cols[("var", var)] = val
            cols["left"] = cols["left"] - costs[var] * val
            cols = _filter(cols, (val >= 0) & (cols["left"] >= 0))
        else:
            cnt = cols["left"] // costs[var] + 1
            cols = _expand(cols, cnt)
            val = _ranks(cnt)
            cols[("var", var)] = val
            cols["left"] = cols["left"] - costs[var] * val
        assigned.add(var)
    ok = np.ones(len(cols["left"]), dtype=bool)
    for a, b, side, which in eqs:
        ok &= cols[("var", a)] + cols[("var", b)] == target(side, which, cols)
    cols = _filter(cols, ok)

    a = [cols[("var", c)] for c in range(3)]
    b = [cols[("var", 3 + c)] for c in range(3)]
    w, eps = cols["w"], cols["eps"]
    k = cols["k"].copy()
    for s in range(3):
        e_in = a[(s + 2) % 3] + b[(s + 1) % 3] + np.where(eps == -1, w, 0)
        e_out = a[(s + 1) % 3] + b[(s + 2) % 3] + np.where(eps == 1, w, 0)
        cols[("in", t, s)] = e_in
        cols[("out", t, s)] = e_out
        if s in newset:
            k[:, tri.side_vertex(t, s, 0)] = e_out + 2 * e_in
            k[:, tri.side_vertex(t, s, 1)] = e_in + 2 * e_out
    k[:, tri.interior_vertex(t)] = 2 * (a[0] + a[1] + a[2]) + (b[0] + b[1] + b[2]) + 3 * w
    cols["k"] = k
    # new edges cost 3(e_in + e_out) each; charged through the variable costs above
    for key in [key for key in cols if isinstance(key, tuple) and key[0] == "var"]:
        del cols[key]
    del cols["w"], cols["eps"]
    return cols


def _last_step(tri: Triangulation, t: int, cols: dict):
    e_in, e_out = [], []
    for s in range(3):
        o = tri.glued_to(t, s)
        e_in.append(cols[("out", o[0], o[1])])
        e_out.append(cols[("in", o[0], o[1])])
    diff = sum(e_out) - sum(e_in)
    keep = diff % 3 == 0
    w = np.abs(diff) // 3
    pos = diff >= 0
    e_out = [np.where(pos, x - w, x) for x in e_out]
    e_in = [np.where(pos, x, x - w) for x in e_in]
    for x in e_in + e_out:
        keep &= x >= 0
    c1 = e_in[0] - e_out[1]
    c2 = e_in[1] - e_out[2]
    offs = [np.zeros_like(c1), c1, c1 + c2]
    lo = np.maximum.reduce([-o for o in offs])
    hi = np.minimum.reduce([e_in[(j - 1) % 3] - offs[j] for j in range(3)])
    bb = [lo + o for o in offs]
    aa = [e_in[(c - 2) % 3] - bb[(c - 1) % 3] for c in range(3)]
    for i in range(3):
        keep &= e_out[i] == aa[(i + 1) % 3] + bb[(i + 2) % 3]
    keep &= lo <= hi
    sin = e_in[0] + e_in[1] + e_in[2]

    def kv_at(b0):
        sb = 3 * b0 + 2 * c1 + c2
        return 2 * (sin - sb) + sb + 3 * w

    kv_hi, kv_lo = kv_at(lo), kv_at(hi)
    left = cols["left"]
    keep &= kv_lo <= left
    top = kv_lo + 3 * ((np.minimum(kv_hi, left) - kv_lo) // 3)
    length = (top - kv_lo) // 3 + 1
    keep &= length > 0
    if not keep.any():
        return None
    v = tri.interior_vertex(t)
    base = cols["k"][keep].copy()
    base[:, v] = kv_lo[keep]
    return base, v, length[keep]


def cone_runs(tri: Triangulation, cap: int):
    """Runs ``(base, v, length)`` one at a time; see :func:`cone_run_chunks`."""
    for base, v, length in cone_run_chunks(tri, cap):
        for row, ln in zip(base.tolist(), length.tolist()):
            yield tuple(row), v, ln


def iter_cone_points(tri: Triangulation, cap: int):
    """Unsorted cone points with sum ``<= cap`` expanded from :func:`cone_runs`."""
    for base, v, length in cone_runs(tri, cap):
        x = list(base)
        for _ in range(length):
            yield tuple(x)
            x[v] += 3


def _random_local(rng, fixed: dict, scale: int, attempts: int = 60):
    """Random corner and trivalent weights for one triangle with some sides fixed.

    ``fixed[i] = (in_i, out_i)``.  Returns ``(eps, corners, w)`` or ``None``.
    """
    for _ in range(attempts):
        if len(fixed) == 3:
            diff = sum(o for _, o in fixed.values()) - sum(i for i, _ in fixed.values())
            if diff % 3:
                return None
            eps, w = (1 if diff >= 0 else -1), abs(diff) // 3
        else:
            w = rng.randint(0, scale)
            eps = rng.choice((1, -1)) if w else 1
        eqs = []
        for i, (e_in, e_out) in fixed.items():
            eqs.append(((i + 2) % 3, 3 + (i + 1) % 3, e_in - (w if eps == -1 else 0)))
            eqs.append(((i + 1) % 3, 3 + (i + 2) % 3, e_out - (w if eps == 1 else 0)))
        val: dict[int, int] = {}
        for var in _VAR_ORDER:
            forced = next(
                (tgt - val[b if a == var else a] for a, b, tgt in eqs if var in (a, b) and (b if a == var else a) in val),
                None,
            )
            val[var] = rng.randint(0, scale) if forced is None else forced
        if min(val.values()) < 0 or any(val[a] + val[b] != tgt for a, b, tgt in eqs):
            continue
        corners = tuple(val[c + off] for c in range(3) for off in (0, 3))
        return eps, corners, w
    return None


def random_track(tri: Triangulation, rng, scale: int = 4, restarts: int = 10_000) -> WeightedTrainTrack:
    """A random compatible weighted train track, built triangle by triangle.

    Side counts already fixed by visited neighbours are matched exactly; the
    remaining weights are drawn from ``0..scale``.  Dead ends restart.
    """
    order = _triangle_order(tri)
    for _ in range(restarts):
        types = [1] * tri.n_triangles
        corners: list = [(0,) * 6] * tri.n_triangles
        hc = [0] * tri.n_triangles
        done: set[int] = set()
        ok = True
        for t in order:
            fixed = {}
            for s in range(3):
                o = tri.glued_to(t, s)
                if o is not None and o[0] in done:
                    tmp = WeightedTrainTrack(tuple(types), tuple(corners), tuple(hc))
                    n_in, n_out = side_counts(tmp, o[0])
                    fixed[s] = (n_out[o[1]], n_in[o[1]])
            local = _random_local(rng, fixed, scale)
            if local is None:
                ok = False
                break
            types[t], corners[t], hc[t] = local
            done.add(t)
        if ok:
            return WeightedTrainTrack(tuple(types), tuple(corners), tuple(hc))
    raise RuntimeError("no compatible track found")
