import math
import random

import pytest

from planarq.bench import (
    CSV_HEADER,
    SuiteConfig,
    confidence_interval,
    derive_seed,
    desk_config,
    linreg_slope,
    mann_kendall,
    run_suite,
    smoke_config,
    summarize,
)

from oracles import mann_kendall_reference


class TestMannKendall:
    def test_constant_series(self):
        t = mann_kendall([3, 3, 3, 3, 3])
        assert t.s == 0 and t.z == 0.0 and t.verdict == "no_trend"

    def test_strictly_increasing_length_five(self):
        t = mann_kendall([1, 2, 3, 4, 5])
        assert t.s == 10
        assert abs(t.var_s - 50.0 / 3.0) < 1e-12
        assert abs(t.z - 9.0 / math.sqrt(50.0 / 3.0)) < 1e-9

    def test_verdicts_at_five_percent(self):
        assert mann_kendall(list(range(10))).verdict == "increasing"
        assert mann_kendall(list(range(10, 0, -1))).verdict == "decreasing"
        assert mann_kendall([1, 5, 2, 4, 3]).verdict == "no_trend"

    def test_tie_correction_matches_reference(self):
        rng = random.Random(13)
        for trial in range(50):
            xs = [rng.randrange(0, 4) for _ in range(rng.randrange(4, 15))]
            t = mann_kendall(xs)
            s, var, z = mann_kendall_reference(xs)
            assert t.s == s
            assert abs(t.var_s - var) < 1e-12
            assert abs(t.z - z) < 1e-12

    def test_sign_antisymmetry_for_tie_free_series(self):
        rng = random.Random(29)
        for trial in range(30):
            xs = rng.sample(range(1000), rng.randrange(4, 12))
            fwd = mann_kendall(xs)
            rev = mann_kendall(list(reversed(xs)))
            assert fwd.s == -rev.s
            assert abs(fwd.z + rev.z) < 1e-12

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            mann_kendall([1, 2, 3])


class TestConfidenceInterval:
    def test_all_equal_collapses(self):
        mean, lo, hi = confidence_interval([2.5, 2.5, 2.5])
        assert mean == lo == hi == 2.5

    def test_two_samples_zero_two(self):
        mean, lo, hi = confidence_interval([0.0, 2.0])
        assert mean == 1.0
        assert abs((mean - lo) - 1.96) < 1e-12
        assert abs((hi - mean) - 1.96) < 1e-12

    def test_hundred_sample_fixture_matches_formula(self):
        rng = random.Random(37)
        xs = [rng.gauss(5.0, 2.0) for _ in range(100)]
        mean, lo, hi = confidence_interval(xs)
        m = sum(xs) / 100
        sd = math.sqrt(sum((x - m) ** 2 for x in xs) / 99)
        half = 1.96 * sd / 10
        assert abs(mean - m) < 1e-12
        assert abs(lo - (m - half)) < 1e-12
        assert abs(hi - (m + half)) < 1e-12
        assert lo <= m <= hi

    def test_single_sample_rejected(self):
        with pytest.raises(ValueError):
            confidence_interval([1.0])

    def test_unsupported_level_rejected(self):
        with pytest.raises(ValueError):
            confidence_interval([1.0, 2.0], level=0.5)


class TestLinregSlope:
    def test_identity_line(self):
        assert linreg_slope([1, 2, 3, 4], [1, 2, 3, 4]) == 1.0

    def test_constant_ys(self):
        assert linreg_slope([1, 2, 3], [7, 7, 7]) == 0.0

    def test_ten_point_fixture_matches_normal_equations(self):
        rng = random.Random(41)
        xs = [float(i) for i in range(10)]
        ys = [3.0 * x - 1.0 + rng.gauss(0, 0.5) for x in xs]
        n = 10
        sx, sy = sum(xs), sum(ys)
        sxx = sum(x * x for x in xs)
        sxy = sum(x * y for x, y in zip(xs, ys))
        want = (n * sxy - sx * sy) / (n * sxx - sx * sx)
        assert abs(linreg_slope(xs, ys) - want) < 1e-9

    def test_degenerate_xs_rejected(self):
        with pytest.raises(ValueError):
            linreg_slope([2, 2, 2], [1, 2, 3])
        with pytest.raises(ValueError):
            linreg_slope([1], [2])


class TestSeedSchedule:
    def test_deterministic(self):
        assert derive_seed(0, 16, 50, 3) == derive_seed(0, 16, 50, 3)

    def test_axis_sensitivity(self):
        base = derive_seed(0, 16, 50, 3)
        assert derive_seed(1, 16, 50, 3) != base
        assert derive_seed(0, 24, 50, 3) != base
        assert derive_seed(0, 16, 100, 3) != base
        assert derive_seed(0, 16, 50, 4) != base

    def test_range(self):
        for s in range(50):
            assert 0 <= derive_seed(s, 48, 400, 19) < 2 ** 31


class TestSuite:
    def test_trivial_cell_yields_zero_gap(self):
        cfg = SuiteConfig(qubit_counts=(2,), depths=(1,), samples=1,
                          density=1.0, topologies=("designed",))
        res = run_suite(cfg)
        assert len(res.records) == 1
        rec = res.records[0]
        assert rec["g_ap"] == 0.0 and rec["g_add"] == 0

    def test_csv_deterministic_across_runs(self):
        cfg = smoke_config(include_timings=False)
        a = run_suite(cfg)
        b = run_suite(cfg)
        assert a.csv_text() == b.csv_text()
        assert a.summary_json() == b.summary_json()
        assert a.csv_text().splitlines()[0] == CSV_HEADER

    def test_summary_recomputable_from_csv(self):
        res = run_suite(smoke_config())
        rows = res.csv_text().strip().splitlines()[1:]
        parsed = []
        for row in rows:
            cid, n, d, topo, seed, gori, gadd, gap, dms, rms = row.split(",")
            parsed.append({
                "circuit_id": cid, "n_qubits": int(n), "depth": int(d),
                "topology": topo, "seed": int(seed), "g_ori": int(gori),
                "g_add": int(gadd), "g_ap": float(gap),
                "design_ms": 0.0, "route_ms": 0.0,
            })
        again = summarize(parsed, res.config)
        for key, cell in res.summary["cells"].items():
            assert abs(again["cells"][key]["mean"] - cell["mean"]) < 1e-5
        for topo, mean in res.summary["overall"].items():
            assert abs(again["overall"][topo] - mean) < 1e-5

    def test_histogram_shape(self):
        res = run_suite(smoke_config())
        hist = res.summary["histogram"]
        assert len(hist["edges"]) == 21
        assert hist["edges"][0] == 0.0
        max_gap = max(r["g_ap"] for r in res.records)
        assert abs(hist["edges"][-1] - max_gap) < 1e-12
        for topo, counts in hist["counts"].items():
            assert len(counts) == 20
            assert sum(counts) == sum(
                1 for r in res.records if r["topology"] == topo
            )

    def test_failed_task_is_logged_and_skipped(self, monkeypatch, caplog):
        import planarq.bench as bench_mod

        calls = {"n": 0}
        real = bench_mod.design

        def flaky(circ, alpha=0.5):
            calls["n"] += 1
            if calls["n"] == 1:
                raise RuntimeError("injected failure")
            return real(circ, alpha=alpha)

        monkeypatch.setattr(bench_mod, "design", flaky)
        cfg = SuiteConfig(qubit_counts=(4,), depths=(5,), samples=2,
                          topologies=("designed",))
        with caplog.at_level("ERROR"):
            res = run_suite(cfg)
        assert len(res.records) == 1  # first sample lost, second survived
        assert any("failed" in r.message for r in caplog.records)

    def test_micro_grid_designed_beats_triangular(self):
        cfg = SuiteConfig(qubit_counts=(8, 12), depths=(10, 20), samples=3,
                          topologies=("designed", "triangular"))
        res = run_suite(cfg)
        overall = res.summary["overall"]
        assert overall["designed"] < overall["triangular"]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SuiteConfig(samples=0)
        with pytest.raises(ValueError):
            SuiteConfig(topologies=("designed", "hex"))

    def test_presets(self):
        desk = desk_config()
        assert desk.qubit_counts == (16, 24, 32, 48)
        assert desk.depths == (50, 100, 200, 400)
        assert desk.samples == 20
        smoke = smoke_config(samples=1)
        assert smoke.samples == 1
