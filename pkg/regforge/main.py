"""
Command-line front-end: check instances, generate constructions, print growth values and run suites.
Reports are JSON on stdout unless --out is given; the exit code is 0 when every verdict passes.
"""
import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from regforge.common.errors import InputError, RegforgeError
from regforge.common.filename import generate_artifact_filename
from regforge.common.rational import format_rational, parse_rational
from regforge.common.reports import InstanceResult, RunReport
from regforge.common.schemas import (AssemblyFile, CertificateFile, CheckerConfig, ClassSpec, ExperimentConfig,
                                     InstanceFile, PartitionFile, dump_json, hierarchy_from_file, instance_from_kgraph,
                                     kgraph_from_instance, load_json)
from regforge.config import get_settings
from regforge.modules.constructions.assembly import ToyIndexMaps, assemble_inductive
from regforge.modules.constructions.counterexample import blow_up, count_triangles, counterexample_gen
from regforge.modules.constructions.cycle import random_cycle_instance
from regforge.modules.deltareg.partition import is_kgraph_delta_regular_partition
from regforge.modules.growth import functions
from regforge.modules.growth.tower import TowerInt
from regforge.modules.rsreg.polyad import is_eps_regular_partition
from regforge.modules.suite.runner import SUITES, run_experiment, write_csv, write_json, write_markdown

logger = logging.getLogger(__name__)

GROWTH_FUNCTIONS: Dict[str, Callable[[int, int], TowerInt]] = {
    "A": functions.A_fn,
    "A*": functions.A_star,
    "m": functions.m_fn,
    "ack": functions.ack,
}
GROWTH_SEQUENCES: Dict[str, Callable[[int], TowerInt]] = {
    "t": functions.t_fn,
    "e": functions.e_fn,
    "delta": functions.delta_fn,
    "c": functions.c_fn,
    "alpha": functions.alpha_fn,
}


def parse_range(text: str) -> List[int]:
    """'a..b' (inclusive), 'a,b,c' or a single integer."""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InputError(f"Not an integer range: {text!r}") from e


def emit(text: str, out: Optional[str]) -> None:
    """Write to a file when a path is given, else stdout."""
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        logger.info("Saved output to: %s", out)
    else:
        print(text)


def render(report: RunReport) -> str:
    return json.dumps(report.model_dump(), sort_keys=True, indent=2)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        config = CheckerConfig(notion=args.notion, delta=args.delta, epsilon=args.epsilon, mode=args.mode,
                               factor=args.factor, rs_mode=args.rs_mode)
    except ValidationError as e:
        raise InputError(f"Bad checker options: {e}") from e
    graph = kgraph_from_instance(load_json(args.instance, InstanceFile))
    partition = hierarchy_from_file(load_json(args.partition, PartitionFile))
    if config.notion == "delta":
        if config.delta is None:
            raise InputError("--delta is required for the delta notion")
        certificates = None
        if args.certificates:
            certificates = load_json(args.certificates, CertificateFile).sides
        report = is_kgraph_delta_regular_partition(graph, partition, config.delta, config.mode, certificates,
                                                   config.factor)
    else:
        if config.epsilon is None:
            raise InputError("--epsilon is required for the rs notion")
        report = is_eps_regular_partition(graph, partition, config.epsilon, config.rs_mode)
    result = InstanceResult(suite="check", instance=Path(args.instance).name, seed=0, verdict=report.verdict,
                            detail=report.model_dump(), elapsed_ms=report.elapsed_ms)
    run = RunReport(provenance={"command": "check", "config": config.model_dump(), "instance": args.instance,
                                "partition": args.partition}, results=[result]).summarize()
    emit(render(run), args.out)
    if report.verdict:
        logger.info("✓ %s is %s-regular", args.instance, config.notion)
        return 0
    logger.info("✗ %s fails: %s", args.instance, report.witness.location if report.witness else "no witness")
    return 1


def _write_artifact(args: argparse.Namespace, text: str, params: Dict[str, Any]) -> None:
    out = args.out
    if out is None and args.out_dir:
        out = str(Path(args.out_dir) / generate_artifact_filename(f"gen-{args.kind}", params, args.seed))
    emit(text, out)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "counterexample":
        delta, q = parse_rational(args.delta), parse_rational(args.q)
        params = {"delta": format_rational(delta), "q": format_rational(q), "k": args.k, "m": args.m}
        result = counterexample_gen(delta, q, args.k, args.seed, enforce_window=args.enforce_window)
        graph = result.graph
        if args.m > 1:
            graph, _ = blow_up(graph, args.m)
        provenance = {"command": "gen counterexample", "params": params, "seed": args.seed,
                      "triangles_before": result.triangles_before, "triangles_after": count_triangles(result.graph),
                      "removed": result.removal_counts, "window_ok": result.window_ok}
        _write_artifact(args, dump_json(instance_from_kgraph(graph, provenance)), params)
        return 0
    if args.kind == "cycle":
        params = {"k": args.k, "n": args.n, "s": args.s}
        graph = random_cycle_instance(args.k, args.n, args.s, args.seed)
        provenance = {"command": "gen cycle", "params": params, "seed": args.seed, "components": 2 * args.k}
        _write_artifact(args, dump_json(instance_from_kgraph(graph, provenance)), params)
        return 0
    params = {"k": args.k, "s": args.s, "n": args.n, "toy": args.toy}
    result = assemble_inductive(args.k, args.s, args.n, maps=ToyIndexMaps() if args.toy else None, seed=args.seed)
    document = AssemblyFile(
        k=args.k,
        classes=[ClassSpec(label=c.label, size=len(c.vertices)) for c in result.layout.classes],
        levels=[[[list(e) for e in part.sorted_edges()] for part in level] for level in result.levels],
        index_maps=[list(row) for row in result.index_maps],
        notes=result.notes,
        provenance={"command": "gen assemble", "params": params, "seed": args.seed},
    )
    _write_artifact(args, dump_json(document), params)
    return 0


def cmd_growth(args: argparse.Namespace) -> int:
    if args.verify is not None:
        report = functions.verify_inequalities(args.verify, args.i_max)
        emit(json.dumps(report.model_dump(), sort_keys=True, indent=2), args.out)
        failed = [c.name for c in report.checks if c.status == "fail"]
        if failed:
            logger.error("✗ Growth inequalities failed: %s", ", ".join(failed))
            return 1
        logger.info("✓ %d growth checks, none failed", len(report.checks))
        return 0
    results = []
    if args.fn in GROWTH_SEQUENCES:
        indices = parse_range(args.first)
        for i in indices:
            value = GROWTH_SEQUENCES[args.fn](i)
            results.append(InstanceResult(suite="growth", instance=f"{args.fn}({i})", seed=0, verdict=True,
                                          detail={"value": str(value), "symbolic": value.is_symbolic}))
    else:
        if args.indices is None:
            raise InputError(f"growth {args.fn} needs k and an index range, e.g. 'growth 2 1..3'")
        k = int(args.first)
        for i in parse_range(args.indices):
            value = GROWTH_FUNCTIONS[args.fn](k, i)
            results.append(InstanceResult(suite="growth", instance=f"{args.fn}_{k}({i})", seed=0, verdict=True,
                                          detail={"value": str(value), "symbolic": value.is_symbolic}))
    run = RunReport(provenance={"command": "growth", "fn": args.fn}, results=results).summarize()
    if args.out:
        emit(render(run), args.out)
    else:
        for r in results:
            print(f"{r.instance} = {r.detail['value']}")
    return 0


async def cmd_suite(args: argparse.Namespace) -> int:
    config = ExperimentConfig(command="suite", suite=args.suite, seeds=parse_range(args.seeds), jobs=args.jobs,
                              out=args.out, csv=args.csv, markdown=args.markdown)
    report = await run_experiment(config)
    if config.out:
        write_json(report, config.out)
    else:
        print(render(report))
    if config.csv:
        write_csv(report, config.csv)
    if config.markdown:
        write_markdown(report, config.markdown)
    summary = report.summary
    logger.info("%s %d/%d instances passed", "✓" if summary["failed"] == 0 else "✗", summary["passed"],
                summary["total"])
    return 0 if summary["failed"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regforge",
                                     description="Hypergraph regularity checkers, constructions and growth bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Check a partition of an instance for regularity")
    check.add_argument("instance", help="Instance JSON file")
    check.add_argument("partition", help="Partition JSON file")
    check.add_argument("--notion", choices=["delta", "rs"], default="delta")
    check.add_argument("--delta", help="Rational delta, e.g. 1/4")
    check.add_argument("--epsilon", help="Rational epsilon for the rs notion")
    check.add_argument("--mode", choices=["perfect", "certificate", "search"], default="perfect")
    check.add_argument("--certificates", help="Edit certificate JSON file for certificate mode")
    check.add_argument("--factor", default="1/2", help="Density factor of the pair condition")
    check.add_argument("--rs-mode", choices=["exact", "sampled"], default="exact")
    check.add_argument("--out", help="Write the report here instead of stdout")

    gen = sub.add_parser("gen", help="Generate a construction as an instance file")
    gen.add_argument("kind", choices=["counterexample", "cycle", "assemble"])
    gen.add_argument("--k", type=int, required=True, help="Class size (counterexample) or uniformity")
    gen.add_argument("--delta", default="2/5")
    gen.add_argument("--q", default="1/2")
    gen.add_argument("--m", type=int, default=1, help="Blow-up multiplicity")
    gen.add_argument("--n", type=int, default=2, help="Ground set size per class")
    gen.add_argument("--s", type=int, default=1, help="Number of levels")
    gen.add_argument("--toy", action="store_true", help="Use identity index maps")
    gen.add_argument("--enforce-window", action="store_true", help="Reject parameters outside the window")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="Output path")
    gen.add_argument("--out-dir", help="Directory for a deterministically named output file")

    growth = sub.add_parser("growth", help="Print growth function values or verify the growth inequalities")
    growth.add_argument("first", nargs="?", help="k, or the index range for sequences")
    growth.add_argument("indices", nargs="?", help="Index range 'a..b'")
    growth.add_argument("--fn", choices=sorted(GROWTH_FUNCTIONS) + sorted(GROWTH_SEQUENCES), default="A")
    growth.add_argument("--delta", dest="delta_range", help="Shorthand for --fn delta over this range")
    growth.add_argument("--verify", type=int, metavar="K", help="Check the inequalities up to K")
    growth.add_argument("--i-max", type=int, default=4)
    growth.add_argument("--out", help="Write the JSON report here")

    suite = sub.add_parser("suite", help="Run named experiment suites over seeds")
    suite.add_argument("--suite", default="all", help=f"Comma-separated names from {', '.join(SUITES)}, or all")
    suite.add_argument("--seeds", default="0..9", help="Seed range 'a..b' or list 'a,b,c'")
    suite.add_argument("--jobs", type=int, default=1)
    suite.add_argument("--out", help="JSON report path")
    suite.add_argument("--csv", help="CSV export path")
    suite.add_argument("--markdown", help="Markdown summary path")
    return parser


async def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "growth":
            if args.delta_range:
                args.fn, args.first = "delta", args.delta_range
            if args.verify is None and args.first is None:
                raise InputError("growth needs arguments, e.g. 'growth 2 1..3', '--delta 1..3' or '--verify 3'")
            return cmd_growth(args)
        return await cmd_suite(args)
    except RegforgeError as e:
        logger.error("✗ %s: %s", type(e).__name__, e)
        return e.exit_code
    except Exception as e:  # pylint: disable=broad-except
        logger.error("✗ Unexpected error: %s", e)
        return 1


def run() -> None:
    """Console entry point."""
    logging.basicConfig(level=get_settings().log_level.upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        sys.exit(1)


if __name__ == "__main__":
    run()
