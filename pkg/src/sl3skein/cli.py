"""Command-line front end.

Every subcommand writes JSON (or CSV) to stdout and a one-line summary to
stderr.  Exit codes: 0 all checks pass, 1 a mathematical mismatch, 2 bad
input or usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Sequence

from .chebyshev import verify_chebyshev
from .cone import (
    coords_to_track,
    cone_points,
    hilbert_basis,
    honeycomb_degree,
    in_balanced,
    in_cone,
    local_r,
    peripheral_decompose,
    random_track,
    track_to_coords,
)
from .errors import ConventionError, DivisibilityViolation, InvalidNetwork, RankDeficient, SkeinError
from .gradedskein import describe_central, in_Gamma_omega, is_graded_central, peripheral_span
from .ptrace import default_network, frobenius_compat_p3, load_network, validate_network
from .qtorus import RootData
from .rank import DEFAULT_BUDGET, rank_K, simplex_counts
from .surface import (
    SurfaceSpec,
    Triangulation,
    build_canonical_triangulation,
    puncture_corner_cycle,
    quiver_matrix,
    triangulation_from_json,
)

OK, MISMATCH, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    genus: int | None = None
    punctures: int | None = None
    surface_file: str | None = None
    variant: str = "fan"
    order: int | None = None
    bound: int | None = None
    budget: int = DEFAULT_BUDGET
    seed: int = 0

    def __post_init__(self) -> None:
        if self.order is not None and self.order < 1:
            raise UsageError("--order must be at least 1")
        if self.bound is not None and self.bound < 0:
            raise UsageError("--bound must be nonnegative")
        if self.budget < 1:
            raise UsageError("--budget must be positive")

    def triangulation(self) -> Triangulation:
        if self.surface_file:
            with open(self.surface_file) as fh:
                return triangulation_from_json(json.load(fh))
        if self.genus is None or self.punctures is None:
            raise UsageError("give --genus and --punctures, or --surface-file")
        spec = SurfaceSpec(self.genus, self.punctures)
        if not spec.triangulable:
            raise UsageError(f"surface (g={self.genus}, n={self.punctures}) has no ideal triangulation")
        return build_canonical_triangulation(spec, self.variant)

    def root_data(self) -> RootData | None:
        return None if self.order is None else RootData(self.order)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _say(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_surface_info(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    Q = quiver_matrix(tri)
    _emit(
        {
            "genus": tri.genus,
            "punctures": tri.punctures,
            "triangles": tri.n_triangles,
            "edges": tri.n_edges,
            "vertices": tri.n_vertices,
            "corner_cycle_lengths": [len(puncture_corner_cycle(tri, p)) for p in range(tri.punctures)],
            "triangulation": tri.to_json(),
            "quiver": Q.to_json(),
        }
    )
    _say(f"{tri.n_triangles} triangles, {tri.n_edges} edges, {tri.n_vertices} quiver vertices")
    return OK


def cmd_cone_check(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    k = _parse_vector(args.k)
    if len(k) != tri.n_vertices:
        raise UsageError(f"vector has length {len(k)}, expected {tri.n_vertices}")
    out: dict = {"k": list(k), "in_balanced": in_balanced(tri, k), "in_cone": in_cone(tri, k)}
    out["r"] = {str(t): local_r(tri, t, k).values for t in range(tri.n_triangles)}
    if out["in_balanced"]:
        out["honeycomb_degrees"] = [honeycomb_degree(tri, t, k) for t in range(tri.n_triangles)]
    if out["in_cone"]:
        core, peri = peripheral_decompose(tri, k)
        out["core"], out["peripheral_part"] = list(core), list(peri)
        out["track"] = coords_to_track(tri, k).to_json()
    _emit(out)
    _say("in cone" if out["in_cone"] else "not in cone")
    return OK if out["in_cone"] else MISMATCH


def cmd_cone_hilbert(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    gens = hilbert_basis(tri, budget=cfg.bound if cfg.bound is not None else 10)
    _emit({"bound": cfg.bound, "generators": [list(g) for g in gens]})
    _say(f"{len(gens)} generators up to coordinate sum {cfg.bound}")
    return OK


def cmd_rank(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    rd = cfg.root_data()
    if rd is None:
        raise UsageError("rank needs --order")
    rep = rank_K(tri, rd)
    _emit(rep.to_json())
    ok = rep.index_matches and (rep.homology_matches or not args.check_closed_form)
    _say(f"index {rep.index}, closed form {rep.closed_form}: {'match' if ok else 'MISMATCH'}")
    return OK if ok else MISMATCH


def cmd_center_enumerate(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    rd = cfg.root_data()
    bound = cfg.bound if cfg.bound is not None else 8
    pts = cone_points(tri, bound)
    central = [k for k in pts if is_graded_central(tri, k, rd)]
    if rd is None:
        expected = peripheral_span(tri, bound)
        entries = [{"k": list(k), "peripheral": True} for k in central]
    else:
        expected = {k for k in pts if in_Gamma_omega(tri, k, rd)}
        entries = [describe_central(tri, k, rd).to_json() for k in central]
    ok = set(central) == set(expected)
    out = {
        "bound": bound,
        "mode": "generic" if rd is None else "root_of_unity",
        "central": entries,
        "cone_points": len(pts),
        "matches_expected": ok,
    }
    if rd is not None:
        out["root_data"] = rd.to_json()
    _emit(out)
    _say(f"{len(central)} central degrees among {len(pts)} cone points: {'match' if ok else 'MISMATCH'}")
    return OK if ok else MISMATCH


def cmd_count_simplex(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    rd = cfg.root_data()
    if rd is None:
        raise UsageError("count simplex needs --order")
    if args.k is not None and args.k < 0:
        raise UsageError("--k must be nonnegative")
    table = simplex_counts(tri, rd, args.k, args.u, cfg.budget)
    sys.stdout.write(table.to_csv())
    last = table.rows[-1]
    note = " (truncated by budget)" if table.truncated else ""
    _say(f"k={last.k}{note}: cone {last.cone_count}, omega {last.omega_count}, ratio {last.ratio}")
    return OK


def cmd_verify_chebyshev(cfg: RunConfig, args) -> int:
    rep = verify_chebyshev(args.mmax, args.samples, cfg.seed)
    _emit(rep)
    _say(f"chebyshev: {'pass' if rep['pass'] else 'FAIL'} on {rep['matrices']} matrices")
    return OK if rep["pass"] else MISMATCH


def cmd_verify_frobenius(cfg: RunConfig, args) -> int:
    rd = cfg.root_data()
    if rd is None:
        raise UsageError("verify frobenius-p3 needs --order")
    net = load_network(args.network) if args.network else default_network()
    report = validate_network(net)
    if not report["pass"]:
        _emit({"validation": report})
        _say("network fails validation")
        return MISMATCH
    rep = frobenius_compat_p3(net, rd)
    rep["root_data"] = rd.to_json()
    _emit(rep)
    _say(f"frobenius on the triangle, N={rd.N}: {'pass' if rep['pass'] else 'FAIL'}")
    return OK if rep["pass"] else MISMATCH


def roundtrip_report(tri: Triangulation, bound: int, samples: int, seed: int) -> dict:
    failures = []
    pts = cone_points(tri, bound)
    for k in pts:
        if track_to_coords(tri, coords_to_track(tri, k)) != k:
            failures.append({"direction": "coords", "k": list(k)})
    rng = random.Random(seed)
    for _ in range(samples):
        track = random_track(tri, rng)
        if coords_to_track(tri, track_to_coords(tri, track)) != track.normalized():
            failures.append({"direction": "track", "track": track.to_json()})
    return {"pass": not failures, "box_points": len(pts), "random_tracks": samples, "failures": failures}


def cmd_verify_roundtrip(cfg: RunConfig, args) -> int:
    tri = cfg.triangulation()
    rep = roundtrip_report(tri, cfg.bound if cfg.bound is not None else 8, args.samples, cfg.seed)
    _emit(rep)
    _say(f"round trips: {'pass' if rep['pass'] else 'FAIL'}")
    return OK if rep["pass"] else MISMATCH


# ---------------------------------------------------------------------------
# argument parsing


def _surface_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--genus", type=int)
    p.add_argument("--punctures", type=int)
    p.add_argument("--surface-file", help="triangulation JSON instead of a canonical one")
    p.add_argument("--variant", choices=("fan", "edge"), default="fan")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sl3skein", description="SL3 skein algebra computations")
    sub = parser.add_subparsers(dest="command", required=True)

    surface = sub.add_parser("surface").add_subparsers(dest="action", required=True)
    p = surface.add_parser("info", help="triangulation and quiver")
    _surface_args(p)
    p.set_defaults(func=cmd_surface_info)

    cone = sub.add_parser("cone").add_subparsers(dest="action", required=True)
    p = cone.add_parser("check", help="cone membership and train-track data")
    _surface_args(p)
    p.add_argument("--k", required=True, help="comma-separated coordinates")
    p.set_defaults(func=cmd_cone_check)
    p = cone.add_parser("hilbert", help="Hilbert basis up to a coordinate-sum bound")
    _surface_args(p)
    p.add_argument("--bound", type=int, default=10)
    p.set_defaults(func=cmd_cone_hilbert)

    p = sub.add_parser("rank", help="rank over the centre versus the closed form")
    _surface_args(p)
    p.add_argument("--order", type=int, required=True, help="M, the order of qhat^2")
    p.add_argument("--check-closed-form", action="store_true", help="also require the homology order to match")
    p.set_defaults(func=cmd_rank)

    center = sub.add_parser("center").add_subparsers(dest="action", required=True)
    p = center.add_parser("enumerate", help="central degrees in a box")
    _surface_args(p)
    p.add_argument("--order", type=int, help="M, the order of qhat^2; omit for generic qhat")
    p.add_argument("--bound", type=int, default=8)
    p.set_defaults(func=cmd_center_enumerate)

    count = sub.add_parser("count").add_subparsers(dest="action", required=True)
    p = count.add_parser("simplex", help="lattice points in dilated simplices")
    _surface_args(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--k", type=int, help="largest dilation; default: largest within the budget")
    p.add_argument("--u", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_count_simplex)

    verify = sub.add_parser("verify").add_subparsers(dest="action", required=True)
    p = verify.add_parser("chebyshev")
    p.add_argument("--mmax", type=int, default=12)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_verify_chebyshev)
    p = verify.add_parser("frobenius-p3")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--network", help="network JSON; default is the shipped dataset")
    p.set_defaults(func=cmd_verify_frobenius)
    p = verify.add_parser("roundtrip")
    _surface_args(p)
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_roundtrip)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        cfg = RunConfig(
            command=f"{args.command} {getattr(args, 'action', '')}".strip(),
            genus=getattr(args, "genus", None),
            punctures=getattr(args, "punctures", None),
            surface_file=getattr(args, "surface_file", None),
            variant=getattr(args, "variant", "fan"),
            order=getattr(args, "order", None),
            bound=getattr(args, "bound", None),
            budget=getattr(args, "budget", DEFAULT_BUDGET),
            seed=getattr(args, "seed", 0),
        )
        return args.func(cfg, args)
    except InvalidNetwork as exc:
        _say(f"invalid network: {exc}")
        return MISMATCH
    except (ConventionError, DivisibilityViolation, RankDeficient) as exc:
        _say(f"internal consistency failure: {exc}")
        return MISMATCH
    except (UsageError, SkeinError, ValueError, OSError, json.JSONDecodeError) as exc:
        _say(f"error: {exc}")
        return USAGE


def main() -> None:
    sys.exit(run())
