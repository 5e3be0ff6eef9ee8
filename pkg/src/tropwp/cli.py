"""Command line interface.

Subcommands: trees, rank, weierstrass, hurwitz, covers, gwp, export.
JSON goes to stdout (or ``--out``); rationals are written as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .covers import cover_from_dict, cover_to_dict, matrices, rh_equality_check
from .divisors import (
    DEFAULT_BUDGET,
    MetricGraph,
    as_fraction,
    divisor_from_json,
    fmt,
    is_weierstrass,
    rank,
)
from .enumeration import DEFAULT_GENUS_CAP, enumerate_all
from .errors import TropWPError, UsageError
from .graphs import enumerate_trivalent_trees, standard_families, to_dot, validate_graph
from .hurwitz import hurwitz_genus0, standard_weight
from .weierstrass import count_gwp, generic_lengths


@dataclass
class RunConfig:
    genus_cap: int = DEFAULT_GENUS_CAP
    budget: int = DEFAULT_BUDGET
    workers: int = 1
    seed: int = 0
    out: str | None = None
    pretty: bool = False
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        workers = getattr(args, "workers", None) or int(os.environ.get("TW_WORKERS", "1") or 1)
        cfg = cls(getattr(args, "genus_cap", DEFAULT_GENUS_CAP), getattr(args, "budget", DEFAULT_BUDGET),
                  workers, getattr(args, "seed", 0) or 0, getattr(args, "out", None),
                  getattr(args, "pretty", False))
        if cfg.genus_cap < 1 or cfg.budget < 1 or cfg.workers < 1:
            raise UsageError("caps and worker counts must be positive")
        return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _emit(cfg: RunConfig, data, text: str | None = None) -> None:
    if cfg.pretty and text is not None:
        out = text
    else:
        out = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _parse_lengths(text: str) -> list[Fraction]:
    try:
        return [as_fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad lengths {text!r}: {exc}") from None


def _metric_graph(args) -> MetricGraph:
    if getattr(args, "graph", None):
        spec = _load_json(args.graph)
        G = validate_graph(spec)
        lengths = None
        if getattr(args, "lengths", None):
            lengths = _parse_lengths(args.lengths)
        elif "lengths" in spec:
            lengths = {int(k): as_fraction(v) for k, v in spec["lengths"].items()}
            return MetricGraph(G, lengths)
        if lengths is None:
            lengths = generic_lengths(len(G.without_legs().edges), getattr(args, "seed", 0) or 0)
        return MetricGraph.from_list(G, lengths)
    if getattr(args, "family", None):
        G = standard_families(args.family, args.genus)
        if getattr(args, "lengths", None):
            return MetricGraph.from_list(G, _parse_lengths(args.lengths))
        return MetricGraph.from_list(G, generic_lengths(len(G.edges), getattr(args, "seed", 0) or 0))
    raise UsageError("give --graph or --family/--genus")


def _parse_profiles(text: str) -> list[tuple[int, ...]]:
    out = []
    for chunk in text.split(";"):
        nums = re.findall(r"\d+", chunk)
        if not nums:
            raise UsageError(f"bad profile {chunk!r}")
        out.append(tuple(int(x) for x in nums))
    return out


def _parse_point(G: MetricGraph, text: str):
    if ":" in text:
        e, off = text.split(":", 1)
        return G.point(int(e), off)
    return G.point(vertex=int(text))


# -- subcommands ------------------------------------------------------------------------

def cmd_trees(args, cfg):
    trees = enumerate_trivalent_trees(args.m, args.mode)
    data = [{"graph": t.graph.to_dict(), "orbitSize": t.orbit_size} for t in trees]
    _emit(cfg, data, f"{len(trees)} trees, total orbit size {sum(t.orbit_size for t in trees)}\n")


def cmd_rank(args, cfg):
    G = _metric_graph(args)
    D = divisor_from_json(G, _load_json(args.divisor))
    r = rank(G, D, args.method, budget=cfg.budget)
    _emit(cfg, {"rank": r, "degree": D.degree}, f"{r}\n")


def cmd_weierstrass(args, cfg):
    G = _metric_graph(args)
    x = _parse_point(G, args.point)
    ok = is_weierstrass(G, x, args.method, budget=cfg.budget)
    _emit(cfg, {"isWeierstrass": ok, "genus": G.genus}, f"{ok}\n")


def cmd_hurwitz(args, cfg):
    h = hurwitz_genus0(args.d, _parse_profiles(args.profiles))
    _emit(cfg, {"hurwitz": fmt(h)}, f"{fmt(h)}\n")


def cmd_covers(args, cfg):
    if args.action == "enumerate":
        infos = enumerate_all(args.genus, args.mode, cap=cfg.genus_cap, workers=cfg.workers)
        data = [{"cover": cover_to_dict(i.cover), "orbitSize": i.orbit_size,
                 "contributing": i.contributing, "determinant": i.determinant} for i in infos]
        _emit(cfg, data, f"{len(infos)} covers, {sum(i.contributing for i in infos)} contributing\n")
        return
    if not args.cover:
        raise UsageError("covers validate needs --cover")
    c = cover_from_dict(_load_json(args.cover))
    M = matrices(c)
    W = standard_weight(c)
    data = {
        "degree": c.deg,
        "rhResidual": rh_equality_check(c),
        "rhNumbers": {str(V): c.rh_number(V) for V in c.source.vertices},
        "F": M.F,
        "I": [[fmt(x) for x in row] for row in M.I],
        "Dlcm": M.Dlcm,
        "weight": {"weight": fmt(W.weight), "edgeProduct": W.edge_product,
                   "lcmDenominator": W.lcm_denominator,
                   "perVertex": [{"vertex": V, "H": fmt(H), "CF": cf} for V, H, cf in W.per_vertex]},
    }
    lines = [f"degree {c.deg}", f"RH residual {data['rhResidual']}",
             f"standard weight {fmt(W.weight)}"]
    lines += [f"  vertex {V}: H={fmt(H)} CF={cf}" for V, H, cf in W.per_vertex]
    _emit(cfg, data, "\n".join(lines) + "\n")


def cmd_gwp(args, cfg):
    G = _metric_graph(args)
    if G.genus > cfg.genus_cap:
        from .errors import GenusCapExceeded
        raise GenusCapExceeded(f"genus {G.genus} exceeds the cap {cfg.genus_cap}")
    report = count_gwp(G, verify_rank=args.verify_rank, seed=cfg.seed, workers=cfg.workers)
    data = report.to_dict()
    lines = [f"total {fmt(report.total)}"]
    lines += [f"  {p['point']} x{p['multiplicity']}" for p in data["points"]]
    _emit(cfg, data, "\n".join(lines) + "\n")


def cmd_export(args, cfg):
    if args.graph:
        G = validate_graph(_load_json(args.graph))
    elif args.family:
        G = standard_families(args.family, args.genus)
    else:
        raise UsageError("give --graph or --family/--genus")
    if args.format == "dot":
        text = to_dot(G)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(cfg, G.to_dict())


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--pretty", action="store_true", help="human readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for generic lengths")
    common.add_argument("--workers", type=int, default=None, help="worker processes (env TW_WORKERS)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="subdivision vertex budget")
    common.add_argument("--genus-cap", type=int, default=DEFAULT_GENUS_CAP)

    p = _Parser(prog="tropwp", description="Weierstrass points on tropical curves")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("trees", parents=[common], help="trivalent marked trees")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--mode", default="fully-labelled", choices=["fully-labelled", "interchangeable"])
    s.set_defaults(func=cmd_trees)

    def graph_args(s):
        s.add_argument("--graph", help="graph JSON (may contain a 'lengths' table)")
        s.add_argument("--family", choices=["O", "T"])
        s.add_argument("--genus", type=int)
        s.add_argument("--lengths", help="comma separated p/q lengths in edge order")

    s = sub.add_parser("rank", parents=[common], help="Baker-Norine rank of a divisor")
    graph_args(s)
    s.add_argument("--divisor", required=True)
    s.add_argument("--method", default="subdivision", choices=["subdivision", "metric", "auto"])
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("weierstrass", parents=[common], help="Weierstrass test for a point")
    graph_args(s)
    s.add_argument("--point", required=True, help="vertex id or edge:offset")
    s.add_argument("--method", default="auto", choices=["subdivision", "metric", "auto"])
    s.set_defaults(func=cmd_weierstrass)

    s = sub.add_parser("hurwitz", parents=[common], help="genus-0 Hurwitz number")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--profiles", required=True, help='e.g. "(2,1,1);(2,1,1);(4)"')
    s.set_defaults(func=cmd_hurwitz)

    s = sub.add_parser("covers", parents=[common], help="enumerate or validate covers")
    s.add_argument("action", choices=["enumerate", "validate"])
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--mode", default="quotient", choices=["quotient", "fully-labelled"])
    s.add_argument("--cover", help="cover JSON for validate")
    s.set_defaults(func=cmd_covers)

    s = sub.add_parser("gwp", parents=[common], help="geometric Weierstrass points")
    s.add_argument("action", choices=["count"])
    graph_args(s)
    s.add_argument("--verify-rank", action="store_true")
    s.set_defaults(func=cmd_gwp)

    s = sub.add_parser("export", parents=[common], help="export a graph")
    s.add_argument("--graph")
    s.add_argument("--family", choices=["O", "T"])
    s.add_argument("--genus", type=int)
    s.add_argument("--format", default="dot", choices=["dot", "json"])
    s.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(args)
        if getattr(args, "family", None) and not getattr(args, "genus", None):
            raise UsageError("--family needs --genus")
        args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except TropWPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
