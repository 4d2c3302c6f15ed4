"""
Named experiment suites run over explicit seeds.
Instances are independent functions of their seed, so they fan out over a process pool and the
results are put back in instance order before any report is written.
"""
import asyncio
import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from regforge.common.errors import InputError
from regforge.common.reports import InstanceResult, RunReport
from regforge.common.rng import bernoulli_mask, make_rng
from regforge.common.schemas import ExperimentConfig
from regforge.modules.constructions.assembly import ToyIndexMaps, assemble_inductive
from regforge.modules.constructions.counterexample import count_triangles, counterexample_gen
from regforge.modules.constructions.cycle import hypergraph_from_bipartite
from regforge.modules.deltareg.oracle import masks_from_adjacency, oracle_pair_regular
from regforge.modules.deltareg.pair import is_pair_delta_regular
from regforge.modules.deltareg.partition import is_kgraph_delta_regular_partition, is_vertex_partition_delta_regular
from regforge.modules.growth.functions import verify_inequalities
from regforge.modules.hypergraph.core import BipartiteGraph, KGraph, VertexLayout, aux_graph
from regforge.modules.hypergraph.oracle import brute_cliques
from regforge.modules.partitions.hierarchy import random_hierarchy
from regforge.modules.partitions.sets import SetPartition
from regforge.modules.rsreg.complexes import complete_complex, dense_counting_check, random_complex

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, Dict[str, Any]]

PAIR_DELTAS = ("1/4", "1/2")


def _pair_oracle(seed: int) -> Outcome:
    rng = make_rng(seed, "suite", "pair-oracle")
    size = 4 if seed % 2 == 0 else 6
    adjacency = rng.integers(0, 2, size=(size, size), dtype=np.int64)
    graph = BipartiteGraph.from_masks(range(size), range(size), masks_from_adjacency(adjacency))
    detail: Dict[str, Any] = {"size": size, "edges": graph.e}
    agree = True
    for delta in PAIR_DELTAS:
        fast = is_pair_delta_regular(graph, delta).verdict
        slow = oracle_pair_regular(adjacency, delta)
        detail[delta] = {"fast": fast, "oracle": slow}
        agree = agree and fast == slow
    return agree, detail


def _claims(seed: int) -> Outcome:
    layout = VertexLayout.contiguous([("V1", 4), ("V2", 4)])
    rng = make_rng(seed, "suite", "claims")
    cells = [(u, v) for u in layout.classes[0].vertices for v in layout.classes[1].vertices]
    kept = bernoulli_mask(rng, "1/2", len(cells))
    graph = KGraph(layout, 2, frozenset(cell for cell, keep in zip(cells, kept) if keep))
    partition = random_hierarchy(layout, 1, 2, 1, seed)
    hypergraph_view = is_kgraph_delta_regular_partition(graph, partition, "1/4").verdict
    pair_view = is_vertex_partition_delta_regular(graph.as_bipartite(), SetPartition(partition.vertex_parts),
                                                  "1/4").verdict
    rebuilt = hypergraph_from_bipartite(aux_graph(graph, 1), layout)
    round_trip = rebuilt.edges == graph.edges
    return hypergraph_view == pair_view and round_trip, {
        "kgraph_verdict": hypergraph_view, "pair_verdict": pair_view, "round_trip": round_trip}


def _counterexample(seed: int) -> Outcome:
    result = counterexample_gen("2/5", "1/2", 8, seed)
    counts = result.removal_counts
    found = count_triangles(result.graph)
    balanced = max(counts.values()) - min(counts.values()) <= 1
    return found == 0 and balanced, {"triangles_after": found, "triangles_before": result.triangles_before,
                                     "removed": counts, "edges": result.graph.e}


def _assembly(seed: int) -> Outcome:
    k = 2 + seed % 2
    result = assemble_inductive(k, 2, 8 if k == 2 else 4, maps=ToyIndexMaps(), seed=seed)
    return True, {"k": k, "levels": [len(level) for level in result.levels], "notes": result.notes}


def _growth(seed: int) -> Outcome:
    report = verify_inequalities(3, 4)
    statuses: Dict[str, int] = {}
    for check in report.checks:
        statuses[check.status] = statuses.get(check.status, 0) + 1
    return report.passed, {"checks": statuses, "seed_ignored": seed}


def _rs(seed: int) -> Outcome:
    sample = random_complex(3, 3, ["1/2"], seed)
    counted = dense_counting_check(sample, "1/2", ["1/2"]).count
    brute = len(brute_cliques(sample.top_polyad()))
    full = complete_complex(sample.layout)
    full_count = dense_counting_check(full, "0", ["1"])
    return counted == brute and full_count.in_band, {"count": counted, "brute": brute,
                                                       "complete_count": full_count.count}


SUITES: Dict[str, Callable[[int], Outcome]] = {
    "pair-oracle": _pair_oracle,
    "claims": _claims,
    "counterexample": _counterexample,
    "assembly": _assembly,
    "growth": _growth,
    "rs": _rs,
}


def run_instance(suite: str, seed: int) -> InstanceResult:
    """Run one instance; errors become a failed result rather than aborting the suite."""
    started = time.perf_counter()
    instance = f"{suite}/{seed}"
    try:
        verdict, detail = SUITES[suite](seed)
        error = None
    except Exception as e:  # pylint: disable=broad-except
        verdict, detail, error = False, {}, f"{type(e).__name__}: {e}"
    elapsed = int((time.perf_counter() - started) * 1000)
    if error is not None:
        logger.error("✗ %s raised %s", instance, error)
    elif not verdict:
        logger.error("✗ %s failed: %s", instance, detail)
    else:
        logger.info("✓ %s", instance)
    return InstanceResult(suite=suite, instance=instance, seed=seed, verdict=verdict, detail=detail,
                          error=error, elapsed_ms=elapsed)


async def run_suites(suites: Sequence[str], seeds: Sequence[int], jobs: int = 1) -> RunReport:
    """Every (suite, seed) instance, across jobs worker processes when jobs > 1."""
    unknown = [name for name in suites if name not in SUITES]
    if unknown:
        raise InputError(f"Unknown suite(s) {', '.join(unknown)}; expected {', '.join(SUITES)}")
    pairs = [(suite, seed) for suite in suites for seed in seeds]
    results: List[InstanceResult]
    if jobs > 1:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            tasks = [loop.run_in_executor(executor, run_instance, suite, seed) for suite, seed in pairs]
            results = list(await asyncio.gather(*tasks))
    else:
        results = [run_instance(suite, seed) for suite, seed in pairs]
    order = {name: index for index, name in enumerate(suites)}
    results.sort(key=lambda r: (order[r.suite], r.seed))
    config = ExperimentConfig(command="suite", suite=",".join(suites), seeds=list(seeds), jobs=jobs)
    report = RunReport(provenance=config.model_dump(), results=results)
    return report.summarize()


def resolve_suites(names: str) -> List[str]:
    """A comma list of suite names, or all."""
    suites = list(SUITES) if names == "all" else [s.strip() for s in names.split(",") if s.strip()]
    unknown = [s for s in suites if s not in SUITES]
    if unknown or not suites:
        listed = ", ".join(unknown) or repr(names)
        raise InputError(f"Unknown suite(s) {listed}; choose from {', '.join(SUITES)} or all")
    return suites


async def run_experiment(config: ExperimentConfig) -> RunReport:
    """Run a suite invocation; the config, with its suite list expanded, becomes the provenance."""
    suites = resolve_suites(config.suite or "all")
    report = await run_suites(suites, config.seeds, config.jobs)
    report.provenance = config.model_copy(update={"suite": ",".join(suites)}).model_dump()
    return report


def write_json(report: RunReport, path: str) -> None:
    Path(path).write_text(json.dumps(report.model_dump(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info("Saved report to: %s", path)


def write_csv(report: RunReport, path: str) -> None:
    """One row per instance, detail flattened to a JSON string."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["suite", "instance", "seed", "verdict", "elapsed_ms", "error", "detail"])
        for r in report.results:
            writer.writerow([r.suite, r.instance, r.seed, r.verdict, r.elapsed_ms, r.error or "",
                             json.dumps(r.detail, sort_keys=True)])
    logger.info("Saved CSV to: %s", path)


def render_markdown(report: RunReport) -> str:
    summary = report.summary
    lines = [
        "# Suite Report",
        "",
        f"**Suites:** {', '.join((report.provenance.get('suite') or '').split(','))}",
        f"**Seeds:** {', '.join(str(s) for s in report.provenance.get('seeds', []))}",
        f"**Passed:** {summary.get('passed', 0)} / {summary.get('total', 0)}",
        "",
        "| Instance | Verdict | Time (ms) | Error |",
        "|---|---|---|---|",
    ]
    for r in report.results:
        lines.append(f"| {r.instance} | {'pass' if r.verdict else 'FAIL'} | {r.elapsed_ms} | {r.error or ''} |")
    return "\n".join(lines) + "\n"


def write_markdown(report: RunReport, path: str) -> None:
    Path(path).write_text(render_markdown(report), encoding="utf-8")
    logger.info("Saved Markdown summary to: %s", path)
