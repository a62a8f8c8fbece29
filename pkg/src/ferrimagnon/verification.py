"""Self-test suite: figure-level checks and invariants over evaluated sweeps.

Each ``check_*`` function returns a :class:`CheckResult`; :func:`run_all`
runs them in order. The CLI ``verify`` command and the acceptance tests both
go through this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import measures
from .measures import MeasureSet
from .model import SystemParams, derive_model
from .oracle import analytic_cm, analytic_steering
from . import dynamics
from .sweep import evaluate_point, optimize_field, preset_spec, refine_max, resonance_field, run_sweep

__all__ = ["CheckResult", "CHECKS", "run_all", "random_no_cavity_params"]

FIG2 = dict(anis_a=0.0163, kappa_a=0.001, kappa_b=0.001, kappa_c=0.003, g_ac=0.01, omega_c_over_hsp=0.85)
POINTS = 401


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def _no_cavity_en(p: SystemParams) -> float:
    return evaluate_point(replace(p, cavity_enabled=False)).e_n  # type: ignore[return-value]


def check_baseline() -> CheckResult:
    res = run_sweep(preset_spec("fig2a", points=POINTS, cavity_enabled=False))
    en = res.column("e_n")
    spread = float(np.max(en) - np.min(en))
    ok = bool(np.all((en >= 0.66) & (en <= 0.69)) and spread <= 1e-6)
    return CheckResult(1, "no-cavity baseline", ok,
                       f"E_N={en[0]:.6f} (target 0.67-0.68 +-0.01), spread over field {spread:.2e} (<=1e-6)")


def check_ideal_squeezing() -> CheckResult:
    frame = measures.bogoliubov_frame(derive_model(SystemParams(spin_ratio=1.6, **FIG2)))
    two_r = 2.0 * frame.r
    en = measures.log_negativity(measures.tmsv_covariance(frame.r))
    ok = abs(two_r - 1.91) <= 0.01 and abs(en - two_r) <= 1e-9
    return CheckResult(2, "ideal squeezing bound", ok,
                       f"2r={two_r:.5f} (1.91+-0.01), |E_N(TMSV)-2r|={abs(en - two_r):.1e}")


def check_resonances() -> CheckResult:
    found = {}
    ok = True
    for s, target in ((1.3, -0.25), (1.0, 0.15)):
        roots = resonance_field(SystemParams(spin_ratio=s, **FIG2))
        found[s] = roots
        ok &= len(roots) == 1 and abs(roots[0] - target) <= 0.02
    return CheckResult(3, "resonance locations", ok,
                       ", ".join(f"s={s}: {[round(x, 4) for x in r]}" for s, r in found.items()))


def check_enhancement() -> CheckResult:
    ok = True
    parts = []
    for s in (1.0, 1.3, 1.6):
        p = SystemParams(spin_ratio=s, **FIG2)
        best_h, best_en = optimize_field(p)
        base = _no_cavity_en(p)
        res = resonance_field(p)
        gap = min(abs(best_h - x) for x in res) if res else math.inf
        ok &= best_en > base and gap <= 0.02
        parts.append(f"s={s}: max E_N={best_en:.4f}>{base:.4f} at {best_h:.4f}, |dH|={gap:.4f}")
    return CheckResult(4, "enhancement and peak alignment", ok, "; ".join(parts))


def check_steering_null_asymmetry() -> CheckResult:
    ok = True
    worst = 0.0
    for s in (0.5, 1.0, 1.3, 1.6, 2.0):
        p = SystemParams(spin_ratio=s, cavity_enabled=False, **FIG2)
        ms = evaluate_point(p)
        ana = analytic_steering(derive_model(p), p)
        ok &= ms.g_a_to_b == 0.0 and ms.g_b_to_a == 0.0
        worst = max(worst, abs(ms.g_a_to_b - ana[0]), abs(ms.g_b_to_a - ana[1]))
    ok &= worst <= 1e-8
    violations = 0
    for s in (1.3, 1.0):
        res = run_sweep(preset_spec("fig2b", points=POINTS, spin_ratio=s))
        ab, ba = res.column("g_a_to_b"), res.column("g_b_to_a")
        violations += int(np.sum(ab < ba) + np.sum((ba > 0) & (ab <= ba)))
    ok &= violations == 0
    return CheckResult(5, "steering null and asymmetry", ok,
                       f"no-cavity null exact, oracle gap {worst:.1e}; ordering violations {violations}")


def check_one_way() -> CheckResult:
    res = run_sweep(preset_spec("fig3a", points=POINTS))
    x = res.axis_values
    ab, ba = res.column("g_a_to_b"), res.column("g_b_to_a")
    stable = np.array([r.stable for r in res.rows])
    above, below = stable & (x > 1.0 + 1e-12), stable & (x < 1.0 - 1e-12)
    # kappa_b > kappa_a means a is the less damped mode: a steers b
    ok = bool(stable.sum() > 2 and np.all(ab[above] > 0) and np.all(ba[above] == 0)
              and np.all(ba[below] > 0) and np.all(ab[below] == 0))
    res_s = run_sweep(preset_spec("fig3b", points=POINTS))
    s = res_s.axis_values
    k = int(np.argmax(res_s.column("g_b_to_a")))
    step = s[1] - s[0]
    ok &= abs(s[k] - 1.0) <= step + 1e-12
    return CheckResult(6, "one-way steering direction", ok,
                       f"direction set by damping ordering; argmax_s G(b->a) = {s[k]:.4f} (grid step {step:.4f})")


def random_no_cavity_params(n: int, seed: int = 20201) -> list[SystemParams]:
    """`n` random stable parameter points with the cavity decoupled."""
    rng = np.random.default_rng(seed)
    out: list[SystemParams] = []
    while len(out) < n:
        p = SystemParams(
            spin_ratio=float(rng.uniform(0.3, 2.0)),
            field_ratio=float(rng.uniform(-0.5, 0.5)),
            anis_a=float(rng.uniform(0.005, 0.05)),
            kappa_a=float(10 ** rng.uniform(-4, -2)),
            kappa_b=float(10 ** rng.uniform(-4, -2)),
            kappa_c=float(10 ** rng.uniform(-4, -2)),
            cavity_enabled=False,
        )
        try:
            dm = derive_model(p)
        except ValueError:
            continue
        if dynamics.is_stable(dynamics.build_drift(dm, p)).margin > dynamics.MARGINAL_TOL:
            out.append(p)
    return out


def check_oracle_equivalence() -> CheckResult:
    worst_rel = worst_st = 0.0
    for p in random_no_cavity_params(200):
        dm = derive_model(p)
        v = dynamics.steady_state(dynamics.build_drift(dm, p), dynamics.build_diffusion(p))
        v4 = measures.reduce(v, ("a", "b"))
        ref = analytic_cm(dm, p).matrix()
        scale = np.max(np.abs(ref))
        denom = np.where(ref != 0.0, np.abs(ref), scale)
        worst_rel = max(worst_rel, float(np.max(np.abs(v4 - ref) / denom)))
        num = measures.steering_pair(v4)
        ana = analytic_steering(dm, p)
        worst_st = max(worst_st, abs(num[0] - ana[0]), abs(num[1] - ana[1]))
    ok = worst_rel <= 1e-8 and worst_st <= 1e-8
    return CheckResult(7, "oracle equivalence (200 points)", ok,
                       f"max entry rel err {worst_rel:.1e}, max steering err {worst_st:.1e}")


def _fig6_point(kappa_c: float, g_ac: float) -> MeasureSet:
    return evaluate_point(SystemParams(spin_ratio=1.0, field_ratio=0.15, g_bc=0.01,
                                       **{**FIG2, "kappa_c": kappa_c, "g_ac": g_ac}))


def check_coherence_dip() -> CheckResult:
    grid = np.linspace(0.0, 0.03, POINTS)
    g_a, peak_a = refine_max(lambda x: _fig6_point(0.003, x).gamma1_bc, grid, xatol=1e-9)
    g_b, peak_b = refine_max(lambda x: _fig6_point(0.001, x).gamma1_bc, grid, xatol=1e-9)
    g_dip, _ = refine_max(lambda x: -_fig6_point(0.001, x).pop_c, grid, xatol=1e-9)
    dip = _fig6_point(0.001, g_dip)
    base = _no_cavity_en(SystemParams(spin_ratio=1.0, field_ratio=0.15, **{**FIG2, "kappa_c": 0.001}))
    sub = {
        "peak(a)=0.92+-0.02": abs(peak_a - 0.92) <= 0.02,
        "peak(a) at g_ac~g_bc": 0.5 <= g_a / 0.01 <= 2.0,
        "peak(b)=1+-1e-4": abs(peak_b - 1.0) <= 1e-4,
        "pop_c(dip)<1e-6": dip.pop_c < 1e-6,
        "D(dip)=1+-1e-6": abs(dip.distinguishability - 1.0) <= 1e-6,
        "E_N(dip)=baseline+-1e-6": abs(dip.e_n - base) <= 1e-6,
    }
    detail = (f"gamma1 peak {peak_a:.4f} at g_ac={g_a:.6f}; equal-kappa peak {peak_b:.8f} at {g_b:.6f}; "
              f"dip g_ac={g_dip:.6f}: pop_c={dip.pop_c:.3e}, D={dip.distinguishability:.6f}, "
              f"E_N={dip.e_n:.6f} vs no-cavity {base:.6f}; "
              f"failed: {[k for k, v in sub.items() if not v] or 'none'}")
    return CheckResult(8, "coherence and dip", all(sub.values()), detail)


def check_cooling() -> CheckResult:
    res13 = run_sweep(preset_spec("fig4", points=POINTS))
    res10 = run_sweep(preset_spec("fig4", points=POINTS, spin_ratio=1.0))
    pb, pc, pa = res13.column("pop_beta"), res13.column("pop_c"), res13.column("pop_alpha")
    i, j = int(np.argmin(pb)), int(np.argmax(pc))
    var = float((pa.max() - pa.min()) / pa.min())
    min13, min10 = float(pb.min()), float(np.nanmin(res10.column("pop_beta")))
    ok = abs(i - j) <= 1 and var < 0.05 and min13 < min10
    return CheckResult(9, "cooling signature", ok,
                       f"argmin pop_beta={i}, argmax pop_c={j}, pop_alpha variation {var:.2e}, "
                       f"min pop_beta s=1.3 {min13:.4f} < s=1.0 {min10:.4f}")


def _property_rows() -> list[MeasureSet]:
    rows: list[MeasureSet] = []
    for name, kw in (("fig2a", {}), ("fig2b", {}), ("fig2b", {"spin_ratio": 1.0}),
                     ("fig3a", {}), ("fig3b", {}), ("fig6a", {}), ("fig6b", {}),
                     ("fig2a", {"cavity_enabled": False})):
        rows.extend(run_sweep(preset_spec(name, points=POINTS, **kw)).rows)
    rows.extend(run_sweep(preset_spec("fig5", points=21)).rows)
    return rows


def check_properties() -> CheckResult:
    rows = [r for r in _property_rows() if r.stable]
    fails = {"residual": 0, "symplectic": 0, "identity": 0, "complementarity": 0, "steer=>ent": 0}
    for r in rows:
        fails["residual"] += r.residual > 1e-10
        fails["symplectic"] += r.min_symplectic < 0.5 - 1e-9
        fails["identity"] += abs((r.pop_a - r.pop_b) - (r.pop_alpha - r.pop_beta)) > 1e-9
        fails["complementarity"] += r.visibility ** 2 + r.distinguishability ** 2 > 1 + 1e-9
        fails["steer=>ent"] += (r.g_a_to_b > 0 or r.g_b_to_a > 0) and not r.e_n > 0
    ok = not any(fails.values()) and len(rows) > 0
    return CheckResult(10, "property suite", ok, f"{len(rows)} stable points, failures {fails}")


CHECKS: list[Callable[[], CheckResult]] = [
    check_baseline,
    check_ideal_squeezing,
    check_resonances,
    check_enhancement,
    check_steering_null_asymmetry,
    check_one_way,
    check_oracle_equivalence,
    check_coherence_dip,
    check_cooling,
    check_properties,
]


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
