"""Invariant suite run by ``orbitstrength verify``.

Each check returns a :class:`CheckResult`; the suite passes when all do.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .action import Scenario, Trajectory, injectivity_probe, CONTINUITY_TOL
from .analysis import LocallyClosedViolation, multiplicity_report, ratio_table
from .geometry import BoxNeighborhood, Interval
from .sojourn import quadrature_oracle, relative_compactness_probe, sojourn_set
from .witness import (Witness, WitnessExhausted, construct_witness, excision_check,
                      self_convergence_witness, verify_witness)

__all__ = ["CheckResult", "random_boxes", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def random_boxes(traj: Trajectory, rng: np.random.Generator, count: int, window: Interval,
                 half_width=(0.05, 1.0)) -> list[BoxNeighborhood]:
    """Boxes centred near random points of the trajectory inside ``window``.

    Half-widths are uniform in ``half_width``; on a torus keep them below
    half the period.
    """
    boxes = []
    for _ in range(count):
        t = rng.uniform(window.lo, window.hi)
        center = traj.point_at(t) + rng.uniform(-0.5, 0.5, traj.dim) * half_width[0]
        if traj.period is not None:
            center = np.mod(center, traj.period)
        widths = rng.uniform(*half_width, traj.dim)
        boxes.append(BoxNeighborhood.centered(center, widths))
    return boxes


def _oracle_check(trajs, rng, window: Interval, step: float, per_traj: int) -> CheckResult:
    worst = 0.0
    for traj in trajs:
        torus = traj.period is not None
        widths = (0.01, 0.05) if torus else (0.05, 1.0)
        for box in random_boxes(traj, rng, per_traj, window, widths):
            s = sojourn_set(traj, box, window)
            est = quadrature_oracle(traj, box, window, step, rng if torus else None)
            err = abs(s.measure() - est)
            if err > step * (2 + len(s)):
                return CheckResult("exact vs quadrature oracle", False,
                                   f"{traj.label} {box}: exact {s.measure()} oracle {est}")
            worst = max(worst, err)
    return CheckResult("exact vs quadrature oracle", True, f"max deviation {worst:.3g}")


def _structure_check(trajs) -> CheckResult:
    for traj in trajs:
        gaps = traj.junction_gaps()
        if gaps and max(gaps) > CONTINUITY_TOL:
            return CheckResult("trajectory continuity", False, f"{traj.label}: jump {max(gaps)}")
    return CheckResult("trajectory continuity", True, f"{len(trajs)} trajectories")


def run_suite(scenario: Scenario, n_max: int = 40, m_max: int = 8, tail_start: int | None = None,
              seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    if scenario.windowed:
        return _run_windowed(scenario, m_max, rng)

    trajs = [scenario.z] + [scenario.orbit_at(n) for n in sorted({1, 2, max(1, n_max // 4)})]
    results.append(_structure_check(trajs))
    results.append(_oracle_check(trajs, rng, Interval.closed(-50, 50), 1e-3, 5))
    hits = [h for traj in trajs[:2] for h in injectivity_probe(traj, 1e-2, 20)]
    results.append(CheckResult("injectivity probe", not hits, f"{len(hits)} coincidences"))
    problems = scenario.check(m_max)
    results.append(CheckResult("nested box family", not problems, "; ".join(problems)))

    report = multiplicity_report(scenario, n_max, m_max, tail_start)
    finite = math.isfinite(report.r_star_lower)
    if finite:
        res = report.quantization_residual
        results.append(CheckResult("integer quantization", res < 1e-6, f"residual {res:.3g}"))
    else:
        results.append(CheckResult("integer quantization", True, "skipped: infinite ratio bound"))
    results.append(CheckResult("M_L <= M_U", report.M_L <= report.M_U,
                               f"M_L={report.M_L} M_U={report.M_U}"))
    if finite and report.M_L >= 1:
        strict = all(t.liminf_est > report.M_L - 1 + 1e-9 for t in report.tails)
        results.append(CheckResult("strict ratio inequality on every box", strict))

    k_top = int(min(report.M_L, 3))
    for k in range(1, k_top + 1):
        try:
            w = construct_witness(scenario, k, n_max, m_max)
        except WitnessExhausted as exc:
            results.append(CheckResult(f"witness k={k}", False, str(exc)))
            continue
        verdict = verify_witness(scenario, w)
        reloaded = Witness.from_csv(w.to_csv())
        same = reloaded == w and verify_witness(scenario, reloaded).passed
        ok = verdict.passed and same and report.M_L >= k
        results.append(CheckResult(f"witness k={k}", ok, verdict.message))

    n_exc = sorted({max(1, n_max // 2), n_max})
    failures = []
    for n in n_exc:
        for m in range(1, min(4, m_max) + 1):
            v = excision_check(scenario, n, m, 0.1, 100)
            if not v.passed:
                failures.append(f"n={n} m={m} s={v.failing_s}")
    results.append(CheckResult("excision (sampled)", not failures, "; ".join(failures)))
    return results


def _run_windowed(scenario: Scenario, m_max: int, rng) -> list[CheckResult]:
    results = []
    try:
        ratio_table(scenario, 1, m_max)
        results.append(CheckResult("locally closed violation detected", False))
    except LocallyClosedViolation as exc:
        results.append(CheckResult("locally closed violation detected", True, f"at m={exc.m}"))
    window = Interval.closed(-50, 50)
    results.append(_oracle_check([scenario.z], rng, window, 1e-3, 5))
    T = 1000.0
    diag = relative_compactness_probe(scenario.z, [scenario.neighborhoods(1)], (T, 2 * T))[0]
    growth = diag.windowed_measures[1] / diag.windowed_measures[0]
    results.append(CheckResult("windowed growth ratio ~ 2", (not diag.bounded) and abs(growth - 2) < 0.2,
                               f"ratio {growth:.4f}"))
    w = self_convergence_witness(scenario, 3, m_max=min(m_max, 4))
    v = verify_witness(scenario, w)
    results.append(CheckResult("self-convergence witness k=3", v.passed, v.message))
    return results
