import os

from planarq.bench import run_suite, smoke_config
from planarq.report import render_report


def test_figures_render_and_are_deterministic(tmp_path):
    res = run_suite(smoke_config())
    d1 = tmp_path / "a"
    d2 = tmp_path / "b"
    paths1 = render_report(res.summary, str(d1))
    paths2 = render_report(res.summary, str(d2))
    names = sorted(os.path.basename(p) for p in paths1)
    assert names == ["gap_hist.png", "gap_vs_depth.png", "gap_vs_qubits.png"]
    for p1, p2 in zip(sorted(paths1), sorted(paths2)):
        with open(p1, "rb") as f1, open(p2, "rb") as f2:
            assert f1.read() == f2.read()
        assert os.path.getsize(p1) > 1000


def test_empty_summary_renders_nothing(tmp_path):
    out = render_report({}, str(tmp_path / "x"))
    assert out == []
