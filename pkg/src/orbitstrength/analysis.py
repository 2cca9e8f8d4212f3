"""Measure-ratio tables and the relative multiplicities they determine.

For a limit point ``z`` with locally closed orbit, the lower multiplicity is
at least ``k`` exactly when, for every box ``W_m`` of a decreasing basic
family, ``liminf_n nu(x_n in W_m) >= k * nu(z in W_m)``; the upper
multiplicity uses ``limsup``.  Here both limits are estimated on a tail of
the computed sequence and the multiplicity is the floor of the smallest
ratio over the family.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .action import Scenario, Trajectory
from .geometry import BoxNeighborhood, Interval, format_number
from .sojourn import UnboundedSojourn, sojourn_measure, sojourn_set

__all__ = [
    "LocallyClosedViolation", "NoRefinement", "PreconditionError",
    "RatioRow", "RatioTable", "TailEstimate", "MultiplicityReport",
    "ratio_table", "tail_estimate", "multiplicity_report",
    "lower_multiplicity", "upper_multiplicity", "quantization_check",
    "refine_neighborhood", "FLOOR_TOL", "STABLE_TOL", "DEFAULT_CAP",
]

FLOOR_TOL = 1e-6
STABLE_TOL = 1e-9
DEFAULT_CAP = 1e6


class LocallyClosedViolation(ValueError):
    """Some box has an unbounded sojourn set for ``z``: the orbit of ``z`` is not locally closed."""

    def __init__(self, message: str, m: int):
        super().__init__(message)
        self.m = m


class NoRefinement(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class RatioRow:
    n: int
    m: int
    nu_n: float
    nu_z: float
    ratio: float


@dataclass(frozen=True)
class RatioTable:
    rows: tuple[RatioRow, ...]

    def column(self, m: int, n_from: int = 1, n_to: int | None = None) -> list[float]:
        return [r.ratio for r in self.rows
                if r.m == m and r.n >= n_from and (n_to is None or r.n <= n_to)]

    @property
    def ms(self) -> list[int]:
        return sorted({r.m for r in self.rows})

    @property
    def ns(self) -> list[int]:
        return sorted({r.n for r in self.rows})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "nu_n", "nu_z", "ratio"])
        for r in self.rows:
            w.writerow([r.n, r.m, format_number(r.nu_n), format_number(r.nu_z), format_number(r.ratio)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RatioTable":
        reader = csv.DictReader(io.StringIO(text))
        rows = [RatioRow(int(d["n"]), int(d["m"]), float(d["nu_n"]), float(d["nu_z"]), float(d["ratio"]))
                for d in reader]
        return cls(tuple(rows))


def _z_measure(scenario: Scenario, m: int, box: BoxNeighborhood) -> float:
    try:
        nu_z = sojourn_set(scenario.z, box).measure()
    except UnboundedSojourn as exc:
        raise LocallyClosedViolation(
            f"{scenario.name}: sojourn set of z in W_{m} is unbounded, so the orbit of z "
            "is not locally closed and measure ratios are undefined; use windowed diagnostics",
            m) from exc
    if not nu_z > 0:
        raise PreconditionError(f"{scenario.name}: z spends no time in W_{m}")
    return nu_z


def ratio_table(scenario: Scenario, n_max: int, m_max: int, window: Interval | None = None) -> RatioTable:
    """All ratios ``nu(x_n in W_m) / nu(z in W_m)`` for ``1 <= n <= n_max``, ``1 <= m <= m_max``.

    Unbounded sojourn sets of ``x_n`` give ratio ``inf`` (unless ``window``
    truncates them).  Raises :class:`LocallyClosedViolation` when a ``z``
    sojourn set is unbounded.
    """
    boxes = {m: scenario.neighborhoods(m) for m in range(1, m_max + 1)}
    nu_z = {m: _z_measure(scenario, m, box) for m, box in boxes.items()}
    rows = []
    for n in range(1, n_max + 1):
        orbit = scenario.orbit_at(n)
        for m in range(1, m_max + 1):
            try:
                nu_n = sojourn_measure(orbit, boxes[m], window)
            except UnboundedSojourn:
                nu_n = math.inf
            rows.append(RatioRow(n, m, nu_n, nu_z[m], nu_n / nu_z[m]))
    return RatioTable(tuple(rows))


@dataclass(frozen=True)
class TailEstimate:
    """Tail extremes of one ratio column.

    ``stabilized`` means the early and late halves of the tail give the same
    liminf and limsup estimates; ``diverging_lower`` / ``diverging_upper``
    mean every late value exceeds every early one (the sequence still climbs),
    so short windows of a periodic sequence are not mistaken for growth.
    Periodic sequences are read correctly once the early half spans a period.
    """

    m: int
    liminf_est: float
    limsup_est: float
    tail_start: int
    stabilized: bool
    diverging_lower: bool = False
    diverging_upper: bool = False


def tail_estimate(values, tail_start: int, m: int = 0, n_first: int = 1) -> TailEstimate:
    """Estimate liminf/limsup of ``values`` (indexed from ``n_first``) over ``n >= tail_start``."""
    tail = np.asarray(values[tail_start - n_first:], dtype=float)
    if tail.size == 0:
        raise ValueError("tail is empty; lower tail_start or raise n_max")
    lo, hi = float(tail.min()), float(tail.max())
    if tail.size < 2:
        return TailEstimate(m, lo, hi, tail_start, False)
    half = tail.size // 2
    early, late = tail[:half], tail[half:]

    def same(a, b):
        return a == b or abs(a - b) <= STABLE_TOL

    stable = same(early.min(), late.min()) and same(early.max(), late.max())
    climbing = bool(late.min() > early.max() + STABLE_TOL)
    return TailEstimate(m, lo, hi, tail_start, stable, diverging_lower=climbing, diverging_upper=climbing)


def _floor_multiplicity(r: float) -> float:
    if math.isinf(r):
        return math.inf
    return math.floor(r + FLOOR_TOL)


@dataclass(frozen=True)
class MultiplicityReport:
    scenario: str
    r_star_lower: float
    r_star_upper: float
    M_L: float
    M_U: float
    quantization_residual: float | None
    table: RatioTable
    tails: tuple[TailEstimate, ...]
    n_max: int
    m_max: int
    tail_start: int
    extrapolated_lower: bool = False
    extrapolated_upper: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def stabilized(self) -> bool:
        return all(t.stabilized for t in self.tails)

    def render(self) -> str:
        f = format_number
        lines = [
            f"scenario: {self.scenario}",
            f"n_max: {self.n_max}  m_max: {self.m_max}  tail_start: {self.tail_start}",
            f"r_star_lower: {f(self.r_star_lower)}",
            f"r_star_upper: {f(self.r_star_upper)}",
            f"M_L: {f(self.M_L)}" + ("  (extrapolated: ratios still growing)" if self.extrapolated_lower else ""),
            f"M_U: {f(self.M_U)}" + ("  (extrapolated: ratios still growing)" if self.extrapolated_upper else ""),
            "quantization_residual: "
            + ("n/a" if self.quantization_residual is None else f(self.quantization_residual)),
            f"stabilized: {'yes' if self.stabilized else 'no'}",
            "m  liminf  limsup  stabilized",
        ]
        for t in self.tails:
            lines.append(f"{t.m}  {f(t.liminf_est)}  {f(t.limsup_est)}  {'yes' if t.stabilized else 'no'}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def multiplicity_report(scenario: Scenario, n_max: int, m_max: int, tail_start: int | None = None,
                        window: Interval | None = None, cap: float = DEFAULT_CAP) -> MultiplicityReport:
    """Lower and upper relative multiplicity of ``z`` along ``(x_n)`` from the ratio table."""
    if tail_start is None:
        tail_start = max(1, n_max // 2)
    if not 1 <= tail_start <= n_max:
        raise ValueError("tail_start must lie in [1, n_max]")
    table = ratio_table(scenario, n_max, m_max, window)
    tails = tuple(tail_estimate(table.column(m), tail_start, m) for m in range(1, m_max + 1))

    ext_lo = all(t.diverging_lower for t in tails) or all(t.liminf_est >= cap for t in tails)
    ext_hi = ext_lo or all(t.diverging_upper for t in tails) or all(t.limsup_est >= cap for t in tails)
    r_lo = math.inf if ext_lo else min(t.liminf_est for t in tails)
    r_hi = math.inf if ext_hi else min(t.limsup_est for t in tails)
    M_L, M_U = _floor_multiplicity(r_lo), _floor_multiplicity(r_hi)

    residual = None
    if math.isfinite(r_lo):
        residual = abs(r_lo - round(r_lo))
    notes = ["multiplicities quantify only over the scenario's box family W_1..W_m_max",
             "assumes the orbit of z is the unique limit of the orbits of x_n near the boxes"]
    if ext_lo or ext_hi:
        notes.append("infinite values are extrapolated from ratios still increasing at n_max")
    if not all(t.stabilized for t in tails):
        notes.append("some tails have not stabilized; raise n_max or tail_start")
    return MultiplicityReport(scenario.name, r_lo, r_hi, M_L, M_U, residual, table, tails,
                              n_max, m_max, tail_start, ext_lo, ext_hi, tuple(notes))


def lower_multiplicity(scenario: Scenario, n_max: int, m_max: int, tail_start: int | None = None,
                       **kwargs) -> MultiplicityReport:
    return multiplicity_report(scenario, n_max, m_max, tail_start, **kwargs)


def upper_multiplicity(scenario: Scenario, n_max: int, m_max: int, tail_start: int | None = None,
                       **kwargs) -> MultiplicityReport:
    return multiplicity_report(scenario, n_max, m_max, tail_start, **kwargs)


def quantization_check(report: MultiplicityReport) -> float:
    """Distance of the lower ratio bound from the nearest integer."""
    r = report.r_star_lower
    if not math.isfinite(r):
        raise PreconditionError("quantization needs a finite ratio bound")
    if not report.stabilized:
        raise PreconditionError("quantization needs stabilized tails")
    return abs(r - round(r))


def refine_neighborhood(traj_z: Trajectory, box: BoxNeighborhood, gamma: float,
                        center=None, max_steps: int = 64) -> BoxNeighborhood:
    """Open box ``V_1`` shrunk toward ``center`` with closure inside ``box`` and
    ``nu(z in box) - nu(z in closure(V_1)) < gamma``.

    The shrink factor is bisected on ``[f, 1]`` starting from ``f = 1/2``;
    ``center`` defaults to the base point of ``traj_z``.
    """
    nu = _bounded_measure(traj_z, box)
    if not nu > 0:
        raise PreconditionError("z spends no time in the box")
    if not 0 < gamma < nu:
        raise PreconditionError(f"gamma must lie in (0, {nu})")
    c = traj_z.base_point if center is None else np.asarray(center, dtype=float)
    if not box.contains(c):
        raise PreconditionError("refinement center must lie in the box")
    lo = 0.0
    for _ in range(max_steps):
        f = 0.5 * (lo + 1.0)
        cand = box.scaled_about(c, f, open=True)
        closure = cand.closure()
        if closure.issubset(box) and nu - _bounded_measure(traj_z, closure) < gamma:
            return cand
        lo = f
    raise NoRefinement(f"no refinement found in {max_steps} bisection steps")


def _bounded_measure(traj: Trajectory, box: BoxNeighborhood) -> float:
    try:
        return sojourn_set(traj, box).measure()
    except UnboundedSojourn as exc:
        raise PreconditionError("sojourn set of z must be bounded") from exc
