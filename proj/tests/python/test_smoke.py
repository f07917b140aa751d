import json
import math

import pytest

import dylp


def test_metric_examples():
    scores = [0.8, 0.7, 0.6, 0.5]
    labels = [1, 0, 1, 0]
    assert dylp.roc_auc(scores, labels) == pytest.approx(0.75)
    assert dylp.max_f1(scores, labels) == pytest.approx(0.8)
    assert dylp.precision_at_k([0.5, 0.5, 0.1], [1, 0, 0], 1) == pytest.approx(0.5)
    assert dylp.ndcg_at_k([0.9, 0.8, 0.7, 0.1], [1, 0, 1, 0], 3) == pytest.approx(
        1.5 / (1 + 1 / math.log2(3))
    )
    assert dylp.gmauc(0.5, 0.75, 1, 10**8) == pytest.approx(0.5, rel=1e-6)


def test_undefined_metric_raises():
    with pytest.raises(dylp.UndefinedMetricError):
        dylp.roc_auc([0.1, 0.2], [1, 1])
    with pytest.raises(dylp.DylpError):
        dylp.pr_auc([0.1], [0])


def test_build_and_evaluate():
    net = dylp.build_network([[(0, 1), (1, 2)], [(0, 2)], [(0, 1), (2, 3)]], directed=False, num_nodes=4)
    assert net.num_steps == 3
    assert net.edges(2) == [(0, 2)]
    report = dylp.evaluate(net, "ts_adj")
    assert report["metrics"]["gmauc"] in (0.0, None)
    assert len(report["steps"]) == 2


def test_generate_compare_distances():
    net = dylp.generate(num_nodes=80, num_steps=5, block_prob=0.03, persist_prob=0.4, seed=2)
    assert net.fingerprint() == dylp.generate(num_nodes=80, num_steps=5, block_prob=0.03, persist_prob=0.4, seed=2).fingerprint()
    rows = dylp.compare(net, ["ts_adj", "ts_aa", {"kind": "ts_katz", "katz_beta": 0.02}], k=20)
    assert [r["rank"] for r in rows] == [1, 2, 3]
    adj = next(r for r in rows if r["name"] == "ts_adj")
    assert adj["metrics"]["gmauc"] == 0.0
    hist = dylp.distances(net, d_max=4)
    assert [b["distance"] for b in hist["buckets"]] == ["1", "2", "3", ">=4", "inf"]


def test_summary_and_io(tmp_path):
    net = dylp.build_network([[(0, 1)], [(0, 1)]], num_nodes=3)
    s = dylp.summarize(net)
    assert s["steps"][1]["prev_edge_prob"] == 1.0
    assert s["steps"][1]["new_edge_prob"] == 0.0
    path = tmp_path / "n.net"
    dylp.save_network(path, net)
    assert dylp.load_network(path).fingerprint() == net.fingerprint()


def test_ingest_and_cli(tmp_path):
    events = tmp_path / "ev.txt"
    events.write_text("a b 1\nb c 1\nc a 2\n")
    net = dylp.ingest(events, {"prebinned": True})
    assert net.num_steps == 2
    assert net.labels == ["a", "b", "c"]
    with pytest.raises(dylp.ConfigError):
        dylp.ingest(events, {"bin_width_seconds": 0})
    out = tmp_path / "ev.net"
    assert dylp.run_cli(["ingest", "--events", str(events), "--prebinned", "--out", str(out)]) == 0
    assert (tmp_path / "ev_summary.csv").exists()
    assert dylp.run_cli(["ingest", "--events", str(tmp_path / "missing.txt"), "--out", str(out)]) == 2


def test_module_location():
    import os

    if os.environ.get("DYLP_EXPECT_BUILD_TREE"):
        assert os.environ["PYTHONPATH"].split(os.pathsep)[0] in dylp.__file__
