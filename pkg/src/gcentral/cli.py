"""Command-line front end.

Subcommands: ``centrality``, ``optimum``, ``hitting``, ``sample``,
``family``, ``ingest``.  Exit codes: 0 success, 2 input error, 3 budget
exceeded, 4 numerical failure.  Every emitted result embeds a run manifest
(command, input digest, seeds, tolerances, version, wall time).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__, optimize
from .errors import (
    BudgetExceededError,
    GCentralError,
    InputError,
    NumericalError,
    SamplingBudgetError,
    TruncationError,
)
from .graph import Graph, format_edge_list, is_connected, load_edge_list, parse_label_file
from .measures import Measure, Score, evaluate
from .optimize import (
    DEFAULT_BUDGET,
    MEASURE_ORDER,
    CrossMeasureReport,
    cross_measure_report,
    set_float_tie_tolerance,
)
from .randomwalk import (
    ROUTE_ABSORBING,
    ROUTE_CONTRACTION,
    hitting_time_set,
    monte_carlo_hitting,
)
from .sampling import (
    DEFAULT_RESTART,
    DEFAULT_STEP_BUDGET,
    FamilyParams,
    SampleConfig,
    generate_family,
    random_walk_sample,
)

MEASURE_COLUMN = {
    Measure.DEGREE: "degree",
    Measure.CLOSENESS: "closeness",
    Measure.BETWEENNESS: "betweenness",
    Measure.RANDOMWALK: "random-walk",
}


@dataclass
class RunManifest:
    """Provenance block embedded in every emitted result."""

    command: str
    input_digest: str | None
    seed: int | None
    tolerances: dict
    version: str
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "version": self.version,
            "wall_time_s": round(self.wall_time_s, 6),
        }


def _digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _load_graph(args) -> tuple[Graph, Path]:
    path = Path(args.graph)
    if not path.exists():
        raise InputError(f"graph file not found: {path}")
    labels = None
    if getattr(args, "labels", None):
        labels = parse_label_file(Path(args.labels).read_text(encoding="utf-8"))
    g = load_edge_list(
        path.read_text(encoding="utf-8"),
        weighted=getattr(args, "weighted", False),
        labels=labels,
    )
    return g, path


def _parse_set(g: Graph, spec: str) -> tuple[int, ...]:
    members = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        members.append(g.vertex_by_label(token))
    if not members:
        raise InputError("empty vertex set")
    return tuple(sorted(set(members)))


def _parse_measures(spec: str | None) -> tuple[Measure, ...]:
    if not spec or spec.strip().lower() == "all":
        return MEASURE_ORDER
    out = []
    for token in spec.split(","):
        if token.strip():
            out.append(Measure.parse(token))
    if not out:
        raise InputError("no measures selected")
    return tuple(dict.fromkeys(out))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _score_dict(score: Score) -> dict:
    d: dict = {"value": score.value}
    d["exact"] = (
        f"{score.exact_num}/{score.exact_den}" if score.exact is not None else None
    )
    return d


def _manifest(args, start: float, path: Path | None, seed: int | None = None) -> RunManifest:
    return RunManifest(
        command=" ".join(args.argv),
        input_digest=_digest(path) if path is not None else None,
        seed=seed,
        tolerances={"float_tie_rel": optimize.FLOAT_TIE_REL},
        version=__version__,
        wall_time_s=time.perf_counter() - start,
    )


def _set_label_list(g: Graph, members) -> list[str] | None:
    return [g.label(v) for v in members] if g.labels is not None else None


def cmd_centrality(args) -> int:
    start = time.perf_counter()
    g, path = _load_graph(args)
    if not is_connected(g):
        raise InputError("graph is disconnected; group measures need a connected graph")
    members = _parse_set(g, args.set)
    measures = _parse_measures(args.measures)
    scores = {m: evaluate(g, members, m) for m in measures}
    manifest = _manifest(args, start, path)
    if args.format == "json":
        payload = {
            "kind": "centrality",
            "set": list(members),
            "set_labels": _set_label_list(g, members),
            "scores": {MEASURE_COLUMN[m]: _score_dict(s) for m, s in scores.items()},
            "manifest": manifest.to_dict(),
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = [f"# manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}"]
        lines.append("measure\tvalue\texact")
        for m, s in scores.items():
            exact = f"{s.exact_num}/{s.exact_den}" if s.exact is not None else "-"
            lines.append(f"{MEASURE_COLUMN[m]}\t{s.value:.6f}\t{exact}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _format_cell(result, g: Graph, use_labels: bool) -> str:
    shown = result.optimal_sets[:2]
    parts = []
    for s in shown:
        names = [g.label(v) for v in s.members] if use_labels else [str(v) for v in s.members]
        parts.append("{" + ", ".join(names) + "}")
    if result.extra_count:
        parts.append(f"... ({result.extra_count})")
    return ", ".join(parts)


def render_report_tsv(
    report: CrossMeasureReport, g: Graph, manifest: RunManifest, use_labels: bool
) -> str:
    lines = [f"# manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}"]
    lines.append("k\t" + "\t".join(MEASURE_COLUMN[m] for m in report.measures))
    for k in range(1, report.k_max + 1):
        cells = [_format_cell(report.cells[(k, m)], g, use_labels) for m in report.measures]
        lines.append(f"{k}\t" + "\t".join(cells))
    lines.append("# best value per cell (exact rational first where available)")
    for k in range(1, report.k_max + 1):
        for m in report.measures:
            lines.append(f"# best\t{k}\t{MEASURE_COLUMN[m]}\t{report.cells[(k, m)].best.render()}")
    lines.append("# pairwise Jaccard overlap of optimal-set unions")
    for (k, ma, mb), j in sorted(
        report.jaccard.items(), key=lambda kv: (kv[0][0], kv[0][1].value, kv[0][2].value)
    ):
        lines.append(f"# jaccard\t{k}\t{MEASURE_COLUMN[ma]}\t{MEASURE_COLUMN[mb]}\t{j:.6f}")
    return "\n".join(lines) + "\n"


def cmd_optimum(args) -> int:
    start = time.perf_counter()
    g, path = _load_graph(args)
    if not is_connected(g):
        raise InputError("graph is disconnected; optimumset needs a connected graph")
    measures = _parse_measures(args.measures)
    report = cross_measure_report(
        g, args.k, budget=args.budget, workers=args.workers, measures=measures
    )
    manifest = _manifest(args, start, path)
    if args.format == "json":
        payload = {"kind": "optimum-report", "manifest": manifest.to_dict()}
        payload.update(report.to_json_dict(include_timing=False))
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    else:
        _emit(render_report_tsv(report, g, manifest, args.use_labels), args.out)
    return 0


def cmd_hitting(args) -> int:
    start = time.perf_counter()
    g, path = _load_graph(args)
    if not is_connected(g):
        raise InputError("graph is disconnected; hitting times need a connected graph")
    members = _parse_set(g, args.set)
    if args.route == "absorbing":
        solution = hitting_time_set(g, members, route=ROUTE_ABSORBING)
    elif args.route == "contraction":
        solution = hitting_time_set(g, members, route=ROUTE_CONTRACTION)
    else:
        solution = monte_carlo_hitting(
            g,
            members,
            walks_per_source=args.walks,
            max_steps=args.max_steps,
            seed=args.seed,
        )
    manifest = _manifest(args, start, path, seed=args.seed if args.route == "montecarlo" else None)
    payload = {
        "kind": "hitting",
        "solution": solution.to_json_dict(),
        "manifest": manifest.to_dict(),
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def cmd_sample(args) -> int:
    start = time.perf_counter()
    g, path = _load_graph(args)
    cfg = SampleConfig(
        target_nodes=args.nodes,
        restart_probability=args.restart,
        seed=args.seed,
        step_budget=args.step_budget,
    )
    result = random_walk_sample(g, cfg)
    prefix = Path(args.out_prefix)
    edge_path = prefix.with_suffix(".edges")
    map_path = prefix.with_suffix(".map")
    manifest = _manifest(args, start, path, seed=args.seed)
    header = f"# manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}\n"
    edge_path.write_text(header + format_edge_list(result.graph), encoding="utf-8")
    map_path.write_text("\n".join(result.mapping_lines(g)) + "\n", encoding="utf-8")
    note = ""
    if result.reduced_to_component:
        note = f"; induced subgraph was disconnected, kept largest component of {result.visited} visited"
    sys.stderr.write(
        f"sampled {result.graph.n} vertices / {result.graph.m} edges "
        f"(seed {args.seed}, rng {result.rng}){note} -> {edge_path}, {map_path}\n"
    )
    return 0


def cmd_family(args) -> int:
    start = time.perf_counter()
    fam = generate_family(FamilyParams(n=args.n, m=args.m))
    manifest = _manifest(args, start, None)
    lines = [
        f"# manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}",
        f"# separating family: n={args.n} (gadget size), m={args.m} (gadgets per kind)",
        f"# hub {fam.hub}",
        "# clique_attach " + " ".join(str(v) for v in fam.clique_attach),
        "# star_roots " + " ".join(str(v) for v in fam.star_roots),
    ]
    body = format_edge_list(fam.graph)
    _emit("\n".join(lines) + "\n" + body, args.out)
    return 0


def ingest_triples(text: str, predicate: str) -> tuple[list[str], dict]:
    """Filter subject-predicate-object lines into a canonical edge list.

    Returns edge lines (``a b`` with a <= b, sorted, deduplicated) and drop
    counters.  Directions are discarded: both orders of the same pair
    collapse onto one undirected edge.
    """
    edges: set[tuple[str, str]] = set()
    stats = {"matched": 0, "self_loops": 0, "duplicates": 0, "skipped_predicate": 0}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if parts and parts[-1] == ".":
            parts = parts[:-1]
        if len(parts) != 3:
            raise InputError(f"triple line {lineno}: expected 'subject predicate object'")
        s, p, o = parts
        if p != predicate:
            stats["skipped_predicate"] += 1
            continue
        stats["matched"] += 1
        if s == o:
            stats["self_loops"] += 1
            continue
        key = (s, o) if s <= o else (o, s)
        if key in edges:
            stats["duplicates"] += 1
        else:
            edges.add(key)
    return [f"{a} {b}" for a, b in sorted(edges)], stats


def cmd_ingest(args) -> int:
    start = time.perf_counter()
    path = Path(args.triples)
    if not path.exists():
        raise InputError(f"triples file not found: {path}")
    lines, stats = ingest_triples(path.read_text(encoding="utf-8"), args.predicate)
    manifest = _manifest(args, start, path)
    header = f"# manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}\n"
    _emit(header + "\n".join(lines) + ("\n" if lines else ""), args.out)
    sys.stderr.write(
        f"kept {len(lines)} edges from {stats['matched']} matching triples "
        f"(dropped {stats['self_loops']} self-loops, {stats['duplicates']} duplicates, "
        f"{stats['skipped_predicate']} other-predicate lines)\n"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--workers",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes (default: available parallelism)",
    )
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, help="max subsets to enumerate"
    )
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="relative tie tolerance for betweenness/random-walk scores",
    )
    common.add_argument("-o", "--out", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(
        prog="gcentral",
        description="Group centrality, optimal central sets, and random-walk hitting times.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("centrality", parents=[common], help="score one vertex set")
    p.add_argument("graph")
    p.add_argument("--set", required=True, help="comma-separated vertex ids or labels")
    p.add_argument("--labels", default=None, help="index<TAB>label file")
    p.add_argument("--weighted", action="store_true", help="edge list has weights")
    p.add_argument("--measures", default="all")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("optimum", parents=[common], help="optimal sets for k = 1..K")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True, help="largest set size to enumerate")
    p.add_argument("--labels", default=None)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--measures", default="all")
    p.add_argument("--use-labels", action="store_true", help="print labels instead of ids")
    p.set_defaults(func=cmd_optimum)

    p = sub.add_parser("hitting", parents=[common], help="hitting times to a vertex set")
    p.add_argument("graph")
    p.add_argument("--set", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--route", choices=("absorbing", "contraction", "montecarlo"),
                   default="absorbing")
    p.add_argument("--walks", type=int, default=10_000, help="Monte-Carlo walks per source")
    p.add_argument("--max-steps", type=int, default=None, help="walk step cap (default 100 n^2)")
    p.set_defaults(func=cmd_hitting)

    p = sub.add_parser("sample", parents=[common], help="random-walk sample of a larger graph")
    p.add_argument("graph")
    p.add_argument("--labels", default=None)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--nodes", type=int, default=40, help="distinct vertices to visit")
    p.add_argument("--restart", type=float, default=DEFAULT_RESTART)
    p.add_argument("--step-budget", type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument("--out-prefix", required=True, help="writes PREFIX.edges and PREFIX.map")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("family", parents=[common], help="generate the clique/star family")
    p.add_argument("--n", type=int, required=True, help="gadget size")
    p.add_argument("--m", type=int, required=True, help="gadgets per kind")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("ingest", parents=[common], help="triples file to edge list")
    p.add_argument("triples")
    p.add_argument("--predicate", required=True, help="keep triples with this predicate")
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = ["gcentral"] + argv
    if getattr(args, "tolerance", None) is not None:
        set_float_tie_tolerance(args.tolerance)
    try:
        return args.func(args)
    except (BudgetExceededError, SamplingBudgetError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except (NumericalError, TruncationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 4
    except (InputError, GCentralError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
