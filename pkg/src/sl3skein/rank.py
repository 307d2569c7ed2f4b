"""Lattices attached to the centre and the rank of the skein algebra over it.

``B`` is the balanced lattice, ``Gamma_bar_3`` its congruent sublattice
(pairing with ``B`` divisible by 18), ``Gamma_bar_o`` the peripheral lattice
and ``Gamma_bar_omega = N B + Gamma_bar_o`` (with ``Gamma_bar_3`` in place of
``B`` when ``3 | N'``).  The rank over the centre is ``[B : Gamma_bar_omega]``.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import asdict, dataclass, field
import numpy as np

from .cone import cone_run_chunks, peripheral_vectors, r_rows
from .errors import BudgetExceeded, RankDeficient
from .lattice import (
    Infinite,
    SublatticeBasis,
    elementary_divisors,
    kernel_mod_m_lattice,
    lattice_index,
    matmul,
    rank,
    transpose,
)
from .qtorus import RootData
from .surface import Triangulation, quiver_matrix

DEFAULT_BUDGET = 10_000_000


@functools.lru_cache(maxsize=64)
def balanced_lattice(tri: Triangulation) -> SublatticeBasis:
    """Vectors whose per-triangle forms are all divisible by 3."""
    n = tri.n_vertices
    return kernel_mod_m_lattice(transpose([list(r) for r in r_rows(tri)]), 3, SublatticeBasis.standard(n))


def peripheral_divisors(tri: Triangulation) -> list[int]:
    """Elementary divisors of the peripheral vectors written in a basis of ``B``."""
    B = balanced_lattice(tri)
    Y = B.coordinates(peripheral_vectors(tri))
    if Y is None or any(c.denominator != 1 for row in Y for c in row):
        raise RankDeficient("peripheral vectors are not balanced")
    return elementary_divisors([[int(c) for c in row] for row in Y])


@functools.lru_cache(maxsize=64)
def peripheral_lattice(tri: Triangulation) -> SublatticeBasis:
    """The ``2n`` peripheral vectors, checked to be independent and primitive in ``B``."""
    vecs = peripheral_vectors(tri)
    if rank(vecs) != len(vecs):
        raise RankDeficient(f"{len(vecs)} peripheral vectors span rank {rank(vecs)}")
    if any(d != 1 for d in peripheral_divisors(tri)):
        raise RankDeficient("peripheral lattice is not a direct summand of the balanced lattice")
    return SublatticeBasis(tri.n_vertices, tuple(tuple(v) for v in vecs))


@functools.lru_cache(maxsize=64)
def congruent_lattice(tri: Triangulation) -> SublatticeBasis:
    """``{a in B : <a, b> == 0 (mod 18) for all b in B}``."""
    B = balanced_lattice(tri)
    Q = quiver_matrix(tri).entries
    A = matmul([list(r) for r in Q], transpose(B.matrix))
    return kernel_mod_m_lattice(A, 18, B)


def frobenius_lattice(tri: Triangulation, rd: RootData, div3: bool | None = None) -> SublatticeBasis:
    """``N L + Gamma_bar_o`` with ``L`` the congruent lattice if ``div3`` else ``B``.

    ``div3`` defaults to ``rd.div3``; forcing it is only meant for comparisons.
    """
    div3 = rd.div3 if div3 is None else div3
    L = congruent_lattice(tri) if div3 else balanced_lattice(tri)
    gens = [list(r) for r in L.scaled(rd.N).basis] + [list(v) for v in peripheral_lattice(tri).basis]
    return SublatticeBasis.from_generators(gens, tri.n_vertices)


def closed_form_K(genus: int, punctures: int, rd: RootData) -> int:
    K = rd.N ** (16 * genus - 16 + 6 * punctures)
    return K * 3 ** (2 * genus) if rd.div3 else K


def homology_index(tri: Triangulation):
    return lattice_index(balanced_lattice(tri), congruent_lattice(tri).basis)


@dataclass(frozen=True)
class RankReport:
    genus: int
    punctures: int
    M: int
    N_prime: int
    N: int
    div3: bool
    index: int | None
    closed_form: int
    homology_order: int | None
    homology_closed_form: int
    index_matches: bool = field(init=False)
    homology_matches: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index_matches", self.index == self.closed_form)
        object.__setattr__(self, "homology_matches", self.homology_order == self.homology_closed_form)

    def to_json(self) -> dict:
        return asdict(self) | {"index_matches": self.index_matches, "homology_matches": self.homology_matches}


def rank_K(tri: Triangulation, rd: RootData) -> RankReport:
    g, n = tri.genus, tri.punctures
    idx = lattice_index(balanced_lattice(tri), frobenius_lattice(tri, rd).basis)
    hom = homology_index(tri)
    return RankReport(
        genus=g,
        punctures=n,
        M=rd.M,
        N_prime=rd.N_prime,
        N=rd.N,
        div3=rd.div3,
        index=None if idx is Infinite else idx,
        closed_form=closed_form_K(g, n, rd),
        homology_order=None if hom is Infinite else hom,
        homology_closed_form=3 ** (2 * g),
    )


# ---------------------------------------------------------------------------
# counting lattice points in dilated simplices


def _stride_cumulate(diff: np.ndarray, stride: int) -> np.ndarray:
    """Turn run start/stop markers into counts: ``c[s] = c[s - stride] + diff[s]``."""
    out = diff.copy()
    for s in range(stride, len(out)):
        out[s] += out[s - stride]
    return out


def _mark_runs(diff: np.ndarray, start: np.ndarray, length: np.ndarray, stride: int) -> None:
    size = len(diff)
    start = start[length > 0]
    length = length[length > 0]
    ok = start < size
    np.add.at(diff, start[ok], 1)
    stop = start + stride * length
    ok &= stop < size
    np.add.at(diff, stop[ok], -1)


def _run_histograms(tri: Triangulation, cap: int, lattice: SublatticeBasis):
    """Per exact coordinate sum: number of cone points and number of those in ``lattice``."""
    A, d = lattice.membership_certificate()
    A = np.array(A, dtype=object) % d
    A = A.astype(np.int64)
    size = cap + 1
    cone_hist = np.zeros(size, dtype=np.int64)
    om_diff = {}  # stride -> difference array
    for base, v, length in cone_run_chunks(tri, cap):
        start = base.sum(axis=1)
        cdiff = np.zeros(size, dtype=np.int64)
        _mark_runs(cdiff, start, length, 3)
        cone_hist += _stride_cumulate(cdiff, 3)

        res = (base % d) @ A % d  # (R, n) residues of base * A
        step = (3 * A[v]) % d  # residue change per step along the run
        period = 1
        for a in step.tolist():
            period = math.lcm(period, d // math.gcd(d, a))
        stride = 3 * period
        diff = om_diff.setdefault(stride, np.zeros(size, dtype=np.int64))
        cur = res
        for t in range(period):
            hit = ~np.any(cur, axis=1) & (length > t)
            if hit.any():
                n_hits = (length[hit] - t + period - 1) // period
                _mark_runs(diff, start[hit] + 3 * t, n_hits, stride)
            cur = (cur + step) % d
    om_hist = np.zeros(size, dtype=np.int64)
    for stride, diff in om_diff.items():
        om_hist += _stride_cumulate(diff, stride)
    return cone_hist, om_hist


@dataclass(frozen=True)
class SimplexRow:
    k: int
    cone_count: int
    omega_count: int | None
    ratio: float | None


@dataclass(frozen=True)
class SimplexTable:
    rows: tuple[SimplexRow, ...]
    u: int
    budget: int
    k: int
    truncated: bool

    def row(self, k: int) -> SimplexRow:
        return self.rows[k]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "cone_count", "omega_count", "ratio"])
        for r in self.rows:
            w.writerow([r.k, r.cone_count, "" if r.omega_count is None else r.omega_count,
                        "" if r.ratio is None else repr(r.ratio)])
        return buf.getvalue()


def simplex_histograms(tri: Triangulation, rd: RootData, cap: int) -> tuple[list[int], list[int]]:
    """Cumulative counts of ``Gamma`` and ``Gamma_omega`` points with sum ``<= k``, ``k = 0..cap``.

    ``Gamma_omega`` points in a dilated simplex are exactly the points of the
    lattice ``Gamma_bar_omega`` there, so membership is tested through the
    lattice certificate; along each run it is periodic.
    """
    cone_hist, om_hist = _run_histograms(tri, cap, frobenius_lattice(tri, rd))
    return np.cumsum(cone_hist).tolist(), np.cumsum(om_hist).tolist()


def _cone_cumulative(tri: Triangulation, cap: int) -> list[int]:
    hist = np.zeros(cap + 1, dtype=np.int64)
    for base, v, length in cone_run_chunks(tri, cap):
        diff = np.zeros(cap + 1, dtype=np.int64)
        _mark_runs(diff, base.sum(axis=1), length, 3)
        hist += _stride_cumulate(diff, 3)
    return np.cumsum(hist).tolist()


def feasible_cap(tri: Triangulation, budget: int, start: int = 24) -> int:
    """Largest ``k`` with at most ``budget`` cone points of sum ``<= k``.

    Counts grow at most like ``k^|V|``, so scaling ``k`` by
    ``(budget / count)^(1/|V|)`` never overshoots; once close, a small
    overshoot brackets the answer.
    """
    dim = tri.n_vertices
    k = start
    while True:
        counts = _cone_cumulative(tri, k)
        if counts[-1] > budget:
            return max((j for j in range(k + 1) if counts[j] <= budget), default=-1)
        if counts[-1] == 0:
            k *= 2
            continue
        grow = (budget / counts[-1]) ** (1 / dim)
        if grow < 1.02:
            k = int(k * 1.03) + 1
        else:
            k = max(k + 1, int(k * grow))


def simplex_counts(
    tri: Triangulation,
    rd: RootData,
    k: int | None,
    u: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> SimplexTable:
    """Table of ``(|Gamma cap jQ|, |Gamma_omega cap (j-u)Q|, ratio)`` for ``j = 0..k``.

    ``k = None`` means the largest ``k`` within ``budget`` cone points.  A
    requested ``k`` beyond the budget is truncated to the largest feasible one
    and the table is flagged ``truncated``.
    """
    if u < 0:
        raise ValueError("u must be nonnegative")
    if budget < 1:
        raise BudgetExceeded("budget must be positive")
    if k is None:
        K = feasible_cap(tri, budget)
        truncated = False
    else:
        if k < 0:
            raise ValueError("k must be nonnegative")
        counts = _cone_cumulative(tri, k)
        truncated = counts[-1] > budget
        K = max((j for j in range(k + 1) if counts[j] <= budget), default=-1) if truncated else k
    if K < 0:
        raise BudgetExceeded(f"budget {budget} is below the smallest count")
    cone, om = simplex_histograms(tri, rd, K)
    rows = []
    for j in range(K + 1):
        o = om[j - u] if j - u >= 0 else None
        ratio = cone[j] / o if o else None
        rows.append(SimplexRow(j, cone[j], o, ratio))
    return SimplexTable(tuple(rows), u, budget, K, truncated)
