"""Witnesses of k-times convergence and sampled checks of the excision property.

A witness assigns to each index ``n`` a box index ``m(n)`` and ``k``
parameters ``t_n^(1..k)`` with every ``t_n^(i).x_n`` in ``W_m(n)`` and all
pairwise gaps larger than the exhaustion radius of ``m(n)``.  With ``m(n)``
increasing, the points converge to ``z`` while the gaps diverge.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .action import Scenario, Trajectory
from .analysis import PreconditionError
from .geometry import Interval, IntervalSet, format_number
from .sojourn import UnboundedSojourn, in_box, sojourn_set

__all__ = [
    "WitnessExhausted", "HorizonTooSmall", "Witness", "Verdict", "ExcisionVerdict",
    "greedy_translates", "max_window_measure", "construct_witness", "verify_witness",
    "excision_check", "self_convergence_witness",
]


class WitnessExhausted(RuntimeError):
    """Removing the exhaustion balls around earlier picks left nothing to pick from."""

    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n


class HorizonTooSmall(RuntimeError):
    pass


@dataclass(frozen=True)
class Witness:
    k: int
    schedule: dict[int, int]
    translates: dict[int, tuple[float, ...]]
    separation: dict[int, float]

    def __post_init__(self):
        for n, ts in self.translates.items():
            if len(ts) != self.k:
                raise ValueError(f"row n={n} has {len(ts)} translates, expected {self.k}")

    @property
    def ns(self) -> list[int]:
        return sorted(self.translates)

    def min_gap(self, n: int) -> float:
        ts = self.translates[n]
        if len(ts) < 2:
            return math.inf
        return min(abs(a - b) for a, b in combinations(ts, 2))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m"] + [f"t{i}" for i in range(1, self.k + 1)] + ["separation"])
        for n in self.ns:
            w.writerow([n, self.schedule[n]] + [format_number(t) for t in self.translates[n]]
                       + [format_number(self.separation[n])])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Witness":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty witness file")
        header = rows[0]
        k = len(header) - 3
        if k < 1 or header[:2] != ["n", "m"] or header[-1] != "separation":
            raise ValueError(f"malformed witness header {header}")
        schedule, translates, separation = {}, {}, {}
        for row in rows[1:]:
            n = int(row[0])
            schedule[n] = int(row[1])
            translates[n] = tuple(float(v) for v in row[2:2 + k])
            separation[n] = float(row[-1])
        return cls(k, schedule, translates, separation)


def greedy_translates(sojourn: IntervalSet, k: int, radius: float, n: int | None = None) -> tuple[float, ...]:
    """Pick ``k`` points: each the midpoint of the leftmost part left after
    removing ``[t - radius, t + radius]`` around the earlier picks."""
    picks: list[float] = []
    remaining = sojourn
    for i in range(k):
        if remaining.is_empty:
            raise WitnessExhausted(
                f"sojourn set exhausted after {i} of {k} picks"
                + ("" if n is None else f" at n={n}"), n)
        t = remaining.parts[0].midpoint
        picks.append(t)
        remaining = remaining.subtract_translates([t], radius)
    return tuple(picks)


def max_window_measure(s: IntervalSet, radius: float) -> float:
    """``max over t in s`` of ``nu([t - radius, t + radius] & s)`` (bounded ``s``).

    The function is piecewise linear in ``t`` with breaks where ``t +- radius``
    meets an endpoint, so it suffices to test endpoints and their shifts.
    """
    if s.is_empty:
        return 0.0
    ends = [e for p in s for e in (p.lo, p.hi)]
    cands = set(ends) | {e + radius for e in ends} | {e - radius for e in ends}
    closure = s.closure()
    best = 0.0
    for t in cands:
        if closure.contains(t):
            window = IntervalSet.of(Interval.closed(t - radius, t + radius))
            best = max(best, s.intersect(window).measure())
    return best


def _orbit_sojourn(scenario: Scenario, n: int, m: int, window: Interval | None = None) -> IntervalSet:
    return sojourn_set(scenario.orbit_at(n), scenario.neighborhoods(m), window)


def _fattened_z(scenario: Scenario, m: int, margin_fraction: float) -> IntervalSet:
    s_z = sojourn_set(scenario.z, scenario.neighborhoods(m))
    return s_z.fatten(margin_fraction * s_z.measure())


def construct_witness(scenario: Scenario, k: int, n_max: int, m_max: int = 8,
                      subsequence: bool = False, margin_fraction: float = 0.1,
                      tail_start: int | None = None) -> Witness:
    """Greedy k-times-convergence witness on ``n <= n_max``.

    ``U_m`` is the open ``margin_fraction * nu_z``-fattening of the sojourn
    set of ``z`` in ``W_m``.  Box ``m`` becomes active at the first ``n_m``
    (after ``n_(m-1)``) from which every ``x_n`` up to ``n_max`` satisfies
    ``max_t nu(K_m t & S_n) <= nu(U_m)`` and ``nu(S_n) > (k-1) nu(U_m)``,
    where ``S_n`` is the sojourn set of ``x_n`` in ``W_m``.  With
    ``subsequence`` each box instead contributes a single index ``i_m >= n_m``
    at which the measure inequality holds.

    Without ``subsequence`` the witness must cover a genuine tail: ``n_1``
    may not exceed ``tail_start`` (default ``n_max // 2``).
    """
    if k < 1:
        raise ValueError("k must be positive")
    cache: dict[tuple[int, int], IntervalSet] = {}

    def S(n, m):
        if (n, m) not in cache:
            cache[n, m] = _orbit_sojourn(scenario, n, m)
        return cache[n, m]

    def excised(n, m, u_measure):
        return max_window_measure(S(n, m), scenario.exhaustion_radius(m)) <= u_measure

    def heavy(n, m, u_measure):
        return S(n, m).measure() > (k - 1) * u_measure

    starts: dict[int, int] = {}
    prev = 0
    for m in range(1, m_max + 1):
        u = _fattened_z(scenario, m, margin_fraction).measure()
        if subsequence:
            # n_m: excision holds from here on; i_m: first heavy index past it
            n_m = next((n for n in range(prev + 1, n_max + 1)
                        if all(excised(j, m, u) for j in range(n, n_max + 1))), None)
            i_m = None if n_m is None else next(
                (n for n in range(n_m, n_max + 1) if heavy(n, m, u)), None)
            if i_m is None:
                break
            starts[m] = i_m
            prev = i_m
        else:
            good = [excised(n, m, u) and heavy(n, m, u) for n in range(1, n_max + 1)]
            n_m = None
            for n in range(n_max, prev, -1):
                if not good[n - 1]:
                    break
                n_m = n
            if m == 1:
                limit = max(1, n_max // 2) if tail_start is None else tail_start
                if n_m is None or n_m > limit:
                    bad = n_m - 1 if n_m is not None else n_max
                    raise WitnessExhausted(
                        f"{scenario.name}: x_{bad} lacks room for {k} separated visits to W_1 "
                        f"(nu(S_n) <= (k-1) nu(U_1) or excision fails) inside the tail n >= {limit}", bad)
            if n_m is None:
                break
            starts[m] = n_m
            prev = n_m
    if not starts:
        raise WitnessExhausted(
            f"{scenario.name}: no n <= {n_max} carries {k} separated visits to W_1", None)

    schedule: dict[int, int] = {}
    if subsequence:
        schedule = {n: m for m, n in starts.items()}
    else:
        ordered = sorted(starts.items())
        for idx, (m, n_m) in enumerate(ordered):
            stop = ordered[idx + 1][1] if idx + 1 < len(ordered) else n_max + 1
            for n in range(n_m, stop):
                schedule[n] = m
    translates, separation = {}, {}
    for n, m in sorted(schedule.items()):
        radius = scenario.exhaustion_radius(m)
        translates[n] = greedy_translates(S(n, m), k, radius, n)
        separation[n] = radius
    return Witness(k, schedule, translates, separation)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    condition: int | None = None
    failure: tuple | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.passed


def verify_witness(scenario: Scenario, w: Witness, shrink_tol: float = 0.0) -> Verdict:
    """Re-check a witness against the definition of k-times convergence.

    (1) every ``t_n^(i).x_n`` lies in ``W_m(n)``, with ``m(n)`` nondecreasing
    and increasing over the range; (2) every pairwise gap exceeds the
    exhaustion radius of ``m(n)`` (less ``shrink_tol``), so gaps diverge as
    ``m(n)`` does.
    """
    ns = w.ns
    if not ns:
        return Verdict(False, None, None, "witness has no rows")
    for n in ns:
        m = w.schedule[n]
        inside = in_box(scenario.orbit_at(n), scenario.neighborhoods(m), w.translates[n])
        if not inside.all():
            i = int(np.argmin(inside)) + 1
            return Verdict(False, 1, (n, i, None), f"t_{n}^({i}).x_{n} is not in W_{m}")
    for a, b in zip(ns, ns[1:]):
        if w.schedule[b] < w.schedule[a]:
            return Verdict(False, 1, (b, None, None), f"schedule decreases at n={b}")
    if len(ns) > 1 and w.schedule[ns[-1]] <= w.schedule[ns[0]]:
        return Verdict(False, 1, (ns[-1], None, None),
                       "schedule never advances, so convergence to z is not witnessed")
    for n in ns:
        bound = scenario.exhaustion_radius(w.schedule[n]) - shrink_tol
        ts = w.translates[n]
        for i, j in combinations(range(w.k), 2):
            if not abs(ts[j] - ts[i]) > bound:
                return Verdict(False, 2, (n, i + 1, j + 1),
                               f"|t_{n}^({j + 1}) - t_{n}^({i + 1})| = {abs(ts[j] - ts[i])} "
                               f"does not exceed K_{w.schedule[n]} radius {bound}")
    return Verdict(True, message=f"{len(ns)} rows verified")


@dataclass(frozen=True)
class ExcisionVerdict:
    passed: bool
    sampled: bool
    witnesses: dict[float, float] = field(default_factory=dict)
    failing_s: float | None = None
    samples: int = 0

    def __bool__(self) -> bool:
        return self.passed


def excision_check(scenario: Scenario, n: int, m: int, superset_margin: float,
                   s_samples: int = 100) -> ExcisionVerdict:
    """Sampled check that every radius-``K_m`` window of the sojourn set of
    ``x_n`` in ``W_m`` fits inside ``U - r + s`` for some ``r`` in the
    sojourn set of ``z``, where ``U`` is the ``superset_margin``-fattening of
    that set.  The verdict records the ``r`` found for each sampled ``s``."""
    s_z = sojourn_set(scenario.z, scenario.neighborhoods(m))
    U = s_z.fatten(superset_margin)
    s_closed = s_z.closure()
    S = _orbit_sojourn(scenario, n, m)
    K = scenario.exhaustion_radius(m)
    if S.is_empty:
        return ExcisionVerdict(True, True, {}, None, 0)

    total = sum(p.length for p in S)
    samples = []
    for p in S:
        samples.extend([p.lo, p.hi])
        share = max(1, round(s_samples * p.length / total)) if total > 0 else 1
        samples.extend(p.lo + (np.arange(share) + 0.5) * (p.length / share))
    witnesses = {}
    for s in samples:
        s = float(s)
        local = S.intersect(IntervalSet.of(Interval.closed(s - K, s + K)))
        r = _find_r(local, U, s_z, s_closed, s)
        if r is None:
            return ExcisionVerdict(False, True, witnesses, s, len(samples))
        witnesses[s] = r
    return ExcisionVerdict(True, True, witnesses, None, len(samples))


def _find_r(local: IntervalSet, U: IntervalSet, s_z: IntervalSet, s_closed: IntervalSet, s: float):
    """Some ``r`` in ``s_z`` (closed) with ``local`` inside ``U - r + s``."""
    cands = []
    for p in local:
        for q in s_z:
            for shift in (p.lo - q.lo, p.hi - q.hi, 0.5 * (p.lo + p.hi) - 0.5 * (q.lo + q.hi)):
                cands.append(s - shift)
    for r in cands:
        if s_closed.contains(r) and local.issubset(U.translate(s - r)):
            return r
    return None


def self_convergence_witness(scenario: Scenario, k: int, horizons=(1e2, 1e3, 1e4, 1e5),
                             m_max: int = 4) -> Witness:
    """Witness that the constant sequence ``z, z, z, ...`` converges k times to ``z``.

    Needs a non-locally-closed orbit.  Row ``n = m`` starts from ``t = 0`` and
    adds returns to ``W_m`` closest to the origin, each outside the
    ``K_m``-balls around earlier picks, widening the window through
    ``horizons`` as needed.
    """
    z = scenario.z
    try:
        sojourn_set(z, scenario.neighborhoods(1))
    except UnboundedSojourn:
        pass
    else:
        raise PreconditionError(f"{scenario.name}: z has a bounded sojourn set, its orbit is locally closed")
    schedule, translates, separation = {}, {}, {}
    for m in range(1, m_max + 1):
        box = scenario.neighborhoods(m)
        radius = scenario.exhaustion_radius(m)
        for T in horizons:
            remaining = sojourn_set(z, box, Interval.closed(-T, T))
            if not remaining.contains(0.0):
                raise PreconditionError("z must lie in the interior of every box")
            picks = [0.0]
            remaining = remaining.subtract_translates([0.0], radius)
            while len(picks) < k and not remaining.is_empty:
                part = min(remaining, key=lambda p: abs(p.midpoint))
                picks.append(part.midpoint)
                remaining = remaining.subtract_translates([part.midpoint], radius)
            if len(picks) == k:
                break
        else:
            raise HorizonTooSmall(f"found fewer than {k} separated returns to W_{m} within T={horizons[-1]}")
        schedule[m], translates[m], separation[m] = m, tuple(picks), radius
    return Witness(k, schedule, translates, separation)
