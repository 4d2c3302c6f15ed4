import csv

import pytest

from regforge.common.errors import InputError
from regforge.common.schemas import ExperimentConfig
from regforge.modules.suite import runner
from regforge.modules.suite.runner import (SUITES, render_markdown, resolve_suites, run_experiment, run_instance,
                                           run_suites, write_csv)


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes_on_seed_zero(suite):
    result = run_instance(suite, 0)
    assert result.error is None
    assert result.verdict, result.detail


def test_failures_are_recorded_not_raised(monkeypatch):
    def boom(seed):
        raise RuntimeError(f"seed {seed} exploded")

    monkeypatch.setitem(runner.SUITES, "boom", boom)
    result = run_instance("boom", 3)
    assert not result.verdict
    assert result.error == "RuntimeError: seed 3 exploded"


async def test_results_keep_suite_and_seed_order():
    report = await run_suites(["counterexample", "pair-oracle"], [2, 0, 1])
    assert [(r.suite, r.seed) for r in report.results] == [
        ("counterexample", 0), ("counterexample", 1), ("counterexample", 2),
        ("pair-oracle", 0), ("pair-oracle", 1), ("pair-oracle", 2),
    ]
    assert report.summary == {"total": 6, "passed": 6, "failed": 0}


async def test_process_pool_matches_serial_run():
    serial = await run_suites(["pair-oracle", "claims"], [0, 1, 2], jobs=1)
    pooled = await run_suites(["pair-oracle", "claims"], [0, 1, 2], jobs=2)
    assert [(r.instance, r.verdict, r.detail) for r in pooled.results] == \
        [(r.instance, r.verdict, r.detail) for r in serial.results]
    assert pooled.provenance["jobs"] == 2


async def test_unknown_suite():
    with pytest.raises(InputError, match="Unknown suite"):
        await run_suites(["nope"], [0])


async def test_csv_and_markdown(tmp_path):
    report = await run_suites(["counterexample"], [0, 1])
    path = tmp_path / "out.csv"
    write_csv(report, str(path))
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert [row["instance"] for row in rows] == ["counterexample/0", "counterexample/1"]
    text = render_markdown(report)
    assert "**Passed:** 2 / 2" in text
    assert "| counterexample/1 | pass |" in text
    assert "**Suites:** counterexample" in text


async def test_experiment_config_becomes_provenance():
    config = ExperimentConfig(command="suite", suite="growth, counterexample", seeds=[0], csv="runs.csv")
    report = await run_experiment(config)
    assert report.provenance == {"command": "suite", "suite": "growth,counterexample", "seeds": [0], "params": {},
                                 "jobs": 1, "out": None, "csv": "runs.csv", "markdown": None}
    assert [r.suite for r in report.results] == ["growth", "counterexample"]
    assert ExperimentConfig.model_validate(report.provenance).seeds == [0]


def test_resolve_suites():
    assert resolve_suites("all") == list(SUITES)
    assert resolve_suites("rs,claims") == ["rs", "claims"]
    with pytest.raises(InputError, match="Unknown suite"):
        resolve_suites(",")
    with pytest.raises(InputError, match="nope"):
        resolve_suites("claims,nope")
