import csv
import json

import pytest

from qcorenet.config import ExperimentConfig
from qcorenet.experiment import (emit_dataset, fig7_rows, fig8_rows, fig9_rows, mean_std,
                                 run_experiment)

SMALL = ExperimentConfig(circuits=("qft:40", "ghz:40"), qubits_per_core=16,
                         parallel_links=(1, 2, 3), delta_improv=(1.0, 100.0), fig8_delta=10.0,
                         repetitions=2, qvol_depth=4)


@pytest.fixture(scope="module")
def records():
    return run_experiment(SMALL)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_mean_std():
    assert mean_std([1.0, 2.0, 3.0]) == (2.0, 1.0)
    assert mean_std([5.0]) == (5.0, 0.0)


def test_record_grid(records):
    # 2 circuits x 5 topologies x 3 link counts x 3 improvement factors x 2 repetitions
    assert len(records) == 2 * 5 * 3 * 3 * 2
    assert {r.delta_improv for r in records} == {1.0, 10.0, 100.0}


def test_infeasible_cells_flagged(records):
    # all-to-all hub degree: 16 - 2*l*(N-1) leaves no room at l = 3
    bad = [r for r in records if r.topology == "all-to-all" and r.parallel_links == 3]
    assert bad and all(not r.feasible and r.total_tlp is None for r in bad)
    assert all(r.feasible for r in records if r.topology == "line")


def test_tables(records):
    rows7 = fig7_rows(records)
    assert len(rows7) == 2 * 5 * 3
    for r in rows7:
        if r["feasible"]:
            assert r["sequential_tlp_mean"] <= r["total_tlp_mean"]
            assert r["repetitions"] == 2
    rows8 = fig8_rows(records, 10.0)
    assert {r["delta_improv"] for r in rows8} == {10.0}
    for circ in ("qft:40", "ghz:40"):
        rel = [r["relative_mean"] for r in rows8 if r["circuit"] == circ and r["feasible"]]
        assert max(rel) == 1.0 and min(rel) > 0
    rows9 = fig9_rows(records)
    for r in rows9:
        if r["feasible"]:
            assert r["overall_mean"] <= min(r["coherence_mean"], r["operational_mean"]) + 1e-15


def test_emit_and_determinism(records, tmp_path):
    a = emit_dataset(records, SMALL, str(tmp_path / "a"))
    b = emit_dataset(run_experiment(SMALL), SMALL, str(tmp_path / "b"))
    for name in ("fig5", "fig7", "fig8", "fig9"):
        with open(a[name], "rb") as fa, open(b[name], "rb") as fb:
            assert fa.read() == fb.read(), name
    rows = read_csv(a["fig7"])
    assert list(rows[0]) == ["circuit", "topology", "parallel_links", "feasible", "num_cores",
                             "total_tlp_mean", "total_tlp_std", "sequential_tlp_mean",
                             "sequential_tlp_std", "repetitions"]
    meta = json.loads(open(a["records"]).read())
    assert meta["metadata"]["fig8_delta_improv"] == 10.0
    assert len(meta["records"]) == len(records)


def test_json_format(records, tmp_path):
    paths = emit_dataset(records, SMALL, str(tmp_path), fmt="json", include_fig5=False)
    rows = json.loads(open(paths["fig9"]).read())
    assert len(rows) == len(fig9_rows(records))
    with pytest.raises(ValueError):
        emit_dataset(records, SMALL, str(tmp_path), fmt="xml")


def test_workers_match_serial(records):
    cfg = ExperimentConfig(**{**SMALL.to_dict(), "workers": 2})
    par = run_experiment(cfg)
    strip = [{k: v for k, v in r.to_dict().items() if k != "wall_clock"} for r in records]
    assert [{k: v for k, v in r.to_dict().items() if k != "wall_clock"} for r in par] == strip
