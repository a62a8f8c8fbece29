import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ferrimagnon import SystemParams, sweep
from ferrimagnon.errors import ConfigError
from ferrimagnon.model import DerivedModel
from ferrimagnon.sweep import (
    AXES,
    CSV_COLUMNS,
    PRESETS,
    SweepSpec,
    apply_axis,
    csv_text,
    evaluate_model,
    evaluate_point,
    preset_spec,
    run_sweep,
    spec_from_config,
    spec_to_config,
)


class TestSweepSpec:
    def test_axes(self):
        assert AXES == ("field_ratio", "spin_ratio", "kappa_ratio_b_over_a", "g_ac")

    @pytest.mark.parametrize("kw", [
        dict(axis="kappa_c"),
        dict(points=1),
        dict(points=2.5),
        dict(start=math.inf),
        dict(stop=math.nan),
        dict(preset="fig9"),
        dict(optimize_field=True),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            SweepSpec(**kw)

    def test_grid_inclusive(self):
        g = SweepSpec(start=0.0, stop=1.0, points=5).grid()
        np.testing.assert_array_equal(g, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_apply_axis(self):
        base = SystemParams(kappa_a=0.002)
        assert apply_axis(base, "kappa_ratio_b_over_a", 0.5).kappa_b == pytest.approx(0.001)
        assert apply_axis(base, "g_ac", 0.02).g_ac == 0.02
        with pytest.raises(ConfigError):
            apply_axis(base, "bogus", 1.0)


class TestPresets:
    @pytest.mark.parametrize("name", PRESETS)
    def test_all_presets_build(self, name):
        spec = preset_spec(name, points=3)
        assert spec.preset == name and spec.points == 3

    def test_unknown(self):
        with pytest.raises(ConfigError):
            preset_spec("fig7")

    def test_overrides(self):
        spec = preset_spec("fig2a", points=3, spin_ratio=1.6, cavity_enabled=False)
        assert spec.base.spin_ratio == 1.6 and not spec.base.cavity_enabled

    def test_metadata_marks_ranges_approximate(self):
        res = run_sweep(preset_spec("fig2a", points=3))
        meta = res.metadata()
        assert meta["preset_ranges_approximate"] is True
        assert meta["base"]["spin_ratio"] == 1.6
        assert meta["tolerances"]["lyapunov_residual_rel"] == 1e-10
        assert meta["columns"] == list(CSV_COLUMNS)


class TestEvaluate:
    def test_all_couplings_zero(self):
        p = SystemParams(cavity_enabled=False)
        ms = evaluate_model(DerivedModel(1.1, 0.9, 0.2, 0.0, 0.0, 0.0, 0.2), p)
        assert ms.stable and ms.e_n == 0.0
        assert (ms.pop_a, ms.pop_b, ms.pop_c) == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)
        assert (ms.g_a_to_b, ms.g_b_to_a) == (0.0, 0.0)

    def test_unstable_point_flagged(self):
        p = SystemParams(cavity_enabled=False, kappa_b=0.0005)
        ms = evaluate_point(p)
        assert not ms.stable and ms.e_n is None and ms.pop_a is None
        assert ms.r > 0

    def test_measure_ranges(self, fig2):
        ms = evaluate_point(fig2(spin_ratio=1.3, field_ratio=-0.25))
        assert ms.stable and ms.e_n > 0
        assert 0 <= ms.gamma1_bc <= 1 and 0 <= ms.visibility <= 1 and 0 <= ms.distinguishability <= 1
        assert all(w > 0 for w in ms.eigenfreqs)


class TestRunSweep:
    def test_one_row_per_point(self):
        spec = preset_spec("fig3a", points=9)
        res = run_sweep(spec)
        assert len(res.rows) == 9
        np.testing.assert_array_equal(res.axis_values, spec.grid())

    def test_unstable_rows_kept(self):
        spec = SweepSpec(base=SystemParams(cavity_enabled=False), axis="kappa_ratio_b_over_a",
                         start=0.5, stop=1.5, points=11)
        res = run_sweep(spec)
        assert len(res.rows) == 11
        assert not res.rows[0].stable and res.rows[5].stable
        assert res.metadata()["unstable_points"] > 0
        line = csv_text(res).splitlines()[1].split(",")
        assert line[1] == "0" and line[2] == ""

    def test_deterministic_csv(self):
        spec = preset_spec("fig2b", points=21)
        assert csv_text(run_sweep(spec)) == csv_text(run_sweep(spec))

    def test_parallel_matches_serial(self):
        spec = preset_spec("fig4", points=33)
        assert csv_text(run_sweep(spec, workers=1)) == csv_text(run_sweep(spec, workers=4))

    def test_env_workers(self, monkeypatch):
        spec = preset_spec("fig2b", points=5)
        monkeypatch.setenv(sweep.WORKERS_ENV, "3")
        assert csv_text(run_sweep(spec)) == csv_text(run_sweep(spec, workers=1))
        monkeypatch.setenv(sweep.WORKERS_ENV, "many")
        with pytest.raises(ConfigError):
            run_sweep(spec)

    def test_csv_header(self):
        text = csv_text(run_sweep(preset_spec("fig2a", points=2)))
        assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
        assert len(text.splitlines()) == 3

    def test_fig2b_steering_ordering(self):
        res = run_sweep(preset_spec("fig2b", points=201))
        ga, gb = res.column("g_a_to_b"), res.column("g_b_to_a")
        ok = ~np.isnan(ga)
        assert np.all(ga[ok] >= gb[ok])
        assert np.all(ga[ok & (gb > 0)] > gb[ok & (gb > 0)])

    def test_fig3a_switch(self):
        res = run_sweep(preset_spec("fig3a", points=51))
        x, ga, gb = res.axis_values, res.column("g_a_to_b"), res.column("g_b_to_a")
        mid = int(np.argmin(np.abs(x - 1.0)))
        assert x[mid] == 1.0
        assert ga[mid] == 0.0 and gb[mid] == 0.0
        assert np.all(ga[:mid] == 0) and np.all(gb[:mid] > 0)
        assert np.all(ga[mid + 1:] > 0) and np.all(gb[mid + 1:] == 0)

    def test_optimize_field(self):
        spec = SweepSpec(base=SystemParams(), axis="spin_ratio", start=1.0, stop=1.3,
                         points=2, optimize_field=True)
        res = run_sweep(spec)
        assert res.optimal_fields[0] == pytest.approx(0.15, abs=0.02)
        assert res.optimal_fields[1] == pytest.approx(-0.25, abs=0.02)
        assert res.metadata()["optimal_field_ratio"] == res.optimal_fields

    def test_fig6d_dip_reaches_no_cavity_baseline(self):
        # E_N at the dip must equal the cavity-free value within 1e-6
        spec = preset_spec("fig6d", points=401)
        res = run_sweep(spec)
        grid = spec.grid()[1:]

        def neg_e_n(g):
            return -evaluate_point(replace(spec.base, g_ac=g)).e_n

        _, neg_dip = sweep.refine_max(neg_e_n, grid, 1e-9)
        assert -neg_dip <= np.nanmin(res.column("e_n")[1:])
        base = evaluate_point(replace(spec.base, cavity_enabled=False))
        assert abs(-neg_dip - base.e_n) <= 1e-6


class TestRefine:
    def test_refine_max_quadratic(self):
        grid = np.linspace(-1, 1, 21)
        x, fx = sweep.refine_max(lambda t: -(t - 0.123) ** 2, grid, 1e-7)
        assert x == pytest.approx(0.123, abs=1e-6) and fx == pytest.approx(0.0, abs=1e-12)

    def test_resonance_field(self, fig2):
        assert sweep.resonance_field(fig2(spin_ratio=1.0)) == pytest.approx([0.15], abs=0.02)


class TestConfig:
    def test_round_trip(self, tmp_path):
        spec = preset_spec("fig6b", points=17, g_bc=0.01)
        path = tmp_path / "cfg.json"
        sweep.save_config(spec, path)
        assert sweep.load_config(path) == spec

    @settings(max_examples=50, deadline=None)
    @given(
        st.sampled_from(AXES[:3]),
        st.floats(-1, 1),
        st.floats(0.1, 2.0),
        st.integers(2, 1000),
        st.booleans(),
        st.floats(0.0005, 0.005),
    )
    def test_round_trip_property(self, axis, start, spin, points, cavity, kc):
        base = SystemParams(spin_ratio=spin, kappa_c=kc, cavity_enabled=cavity)
        spec = SweepSpec(base=base, axis=axis, start=start, stop=start + 1, points=points)
        assert spec_from_config(json.loads(json.dumps(spec_to_config(spec)))) == spec

    def test_unknown_key(self):
        cfg = spec_to_config(SweepSpec())
        cfg["spin_raito"] = 1.0
        with pytest.raises(ConfigError, match="spin_raito"):
            spec_from_config(cfg)

    def test_bad_values(self, tmp_path):
        with pytest.raises(ConfigError):
            spec_from_config({"kappa_a": -1.0})
        with pytest.raises(ConfigError):
            spec_from_config({"axis": ["field_ratio"]})
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ConfigError):
            sweep.load_config(bad)
        with pytest.raises(ConfigError):
            sweep.load_config(tmp_path / "missing.json")

    def test_metadata_sidecar(self, tmp_path):
        res = run_sweep(preset_spec("fig2a", points=2))
        sweep.write_metadata(res, tmp_path / "m.json")
        sweep.write_csv(res, tmp_path / "r.csv")
        meta = json.loads((tmp_path / "m.json").read_text())
        assert meta["version"] and meta["points"] == 2
        assert (tmp_path / "r.csv").read_text() == csv_text(res)
