"""Sojourn sets ``{t : t.x in box}`` of piecewise trajectories, solved in closed form.

Affine coordinates give linear inequalities.  Sinusoidal coordinates are
split into monotone branches and each branch is inverted with one arcsine.
Periodic (torus) trajectories are unwrapped over the integer translates of
the box that the segment can reach, which requires a bounded window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .action import Affine, Segment, Sinusoid, Trajectory
from .geometry import BoxNeighborhood, Interval, IntervalSet

__all__ = [
    "UnboundedSojourn", "sojourn_set", "sojourn_measure", "quadrature_oracle", "quadrature_oracle_many",
    "in_box", "relative_compactness_probe", "CompactnessDiagnostic",
]


class UnboundedSojourn(ValueError):
    """The sojourn set is unbounded (or cannot be bounded) and no window was given.

    ``provably_infinite`` is set when a half-infinite segment sits in the box
    for all of its parameters, so the measure is certainly infinite.
    """

    def __init__(self, message: str, provably_infinite: bool = False):
        super().__init__(message)
        self.provably_infinite = provably_infinite


def _affine_preimage(comp: Affine, face: Interval, dom: Interval) -> list[Interval]:
    if comp.b == 0:
        return [dom] if face.contains(comp.a) else []
    lo = (face.lo - comp.a) / comp.b
    hi = (face.hi - comp.a) / comp.b
    if comp.b > 0:
        iv = Interval(lo, hi, face.lo_open, face.hi_open)
    else:
        iv = Interval(hi, lo, face.hi_open, face.lo_open)
    return [iv]


def _sinusoid_preimage(comp: Sinusoid, face: Interval, dom: Interval) -> list[Interval]:
    """Preimage over the bounded domain ``dom``, one monotone branch at a time."""
    A, w, phi = comp.amplitude, comp.rate, comp.phase
    if w < 0:
        A, w, phi = -A, -w, -phi
    if A == 0:
        return [dom] if face.contains(comp.offset) else []
    th_lo = w * dom.lo + phi
    th_hi = w * dom.hi + phi
    # branch k covers theta in [k pi - pi/2, k pi + pi/2], where sin(theta) = (-1)^k sin(theta - k pi)
    k_first = math.floor((th_lo + math.pi / 2) / math.pi)
    k_last = math.ceil((th_hi - math.pi / 2) / math.pi)
    out = []
    for k in range(k_first, k_last + 1):
        amp = A if k % 2 == 0 else -A
        # need offset + amp*sin(psi) in face, psi in [-pi/2, pi/2]
        u_lo = (face.lo - comp.offset) / amp
        u_hi = (face.hi - comp.offset) / amp
        open_lo, open_hi = face.lo_open, face.hi_open
        if amp < 0:
            u_lo, u_hi = u_hi, u_lo
            open_lo, open_hi = open_hi, open_lo
        if u_lo > 1 or u_hi < -1:
            continue
        if u_lo <= -1:
            psi_lo, open_lo = -math.pi / 2, open_lo and u_lo == -1
        else:
            psi_lo = math.asin(u_lo)
        if u_hi >= 1:
            psi_hi, open_hi = math.pi / 2, open_hi and u_hi == 1
        else:
            psi_hi = math.asin(u_hi)
        base = k * math.pi - phi
        out.append(Interval((psi_lo + base) / w, (psi_hi + base) / w, open_lo, open_hi))
    return out


def _component_preimage(comp, face: Interval, dom: Interval, period: float | None) -> IntervalSet:
    """Local parameters in ``dom`` where the coordinate lies in ``face`` (mod ``period``)."""
    solve = _affine_preimage if isinstance(comp, Affine) else _sinusoid_preimage
    if period is None or face.hi - face.lo >= period:
        if period is not None:
            return IntervalSet.of(dom)
        return IntervalSet(solve(comp, face, dom)).intersect(IntervalSet.of(dom))
    # enumerate the translates face + j*period the coordinate can reach on dom
    if isinstance(comp, Affine):
        ends = (comp(dom.lo), comp(dom.hi))
        vmin, vmax = min(ends), max(ends)
    else:
        vmin = comp.offset - abs(comp.amplitude)
        vmax = comp.offset + abs(comp.amplitude)
    j_lo = math.floor((vmin - face.hi) / period)
    j_hi = math.ceil((vmax - face.lo) / period)
    parts = []
    for j in range(j_lo, j_hi + 1):
        parts.extend(solve(comp, face.shift(j * period), dom))
    return IntervalSet(parts).intersect(IntervalSet.of(dom))


def _segment_sojourn(seg: Segment, box: BoxNeighborhood, period: float | None,
                     window: Interval | None) -> IntervalSet:
    dom = seg.domain.shift(-seg.origin)
    if window is not None:
        dom_set = IntervalSet.of(dom).intersect(IntervalSet.of(window.shift(-seg.origin)))
    else:
        dom_set = IntervalSet.of(dom)
    if dom_set.is_empty:
        return dom_set

    faces = [box.face_interval(i) for i in range(box.dim)]
    # bounding constraints first: non-periodic affine, steepest first
    order = sorted(range(box.dim), key=lambda i: (
        not (isinstance(seg.components[i], Affine) and period is None),
        -abs(getattr(seg.components[i], "b", 0.0))))
    current = dom_set
    for i in order:
        comp = seg.components[i]
        needs_bounded = isinstance(comp, Sinusoid) or period is not None
        parts = []
        for part in current:
            if needs_bounded and not part.is_bounded:
                raise UnboundedSojourn(
                    f"sojourn set on segment {seg.domain} may be unbounded; supply a window")
            parts.extend(_component_preimage(comp, faces[i], part, period).parts)
        current = IntervalSet(parts)
        if current.is_empty:
            return current
    if window is None and not current.is_bounded:
        raise UnboundedSojourn(
            f"trajectory stays in the box for all parameters of a half-infinite segment {seg.domain}",
            provably_infinite=True)
    return current.translate(seg.origin)


def sojourn_set(traj: Trajectory, box: BoxNeighborhood, window: Interval | None = None) -> IntervalSet:
    """Exact set of ``t`` with ``traj.point_at(t)`` in ``box`` (intersected with ``window``).

    Raises :class:`UnboundedSojourn` when the set is unbounded, or cannot be
    shown bounded, and no window is supplied.
    """
    if box.dim != traj.dim:
        raise ValueError(f"box dimension {box.dim} does not match trajectory dimension {traj.dim}")
    if window is None and traj.period is not None:
        raise UnboundedSojourn("periodic trajectories need a window")
    parts = []
    for seg in traj.segments:
        parts.extend(_segment_sojourn(seg, box, traj.period, window).parts)
    return IntervalSet(parts)


def sojourn_measure(traj: Trajectory, box: BoxNeighborhood, window: Interval | None = None) -> float:
    """Haar (Lebesgue) measure of the sojourn set; ``inf`` when provably infinite."""
    try:
        return sojourn_set(traj, box, window).measure()
    except UnboundedSojourn as exc:
        if exc.provably_infinite:
            return math.inf
        raise


def _wrap(traj: Trajectory, box: BoxNeighborhood, pts: np.ndarray) -> np.ndarray:
    if traj.period is None:
        return pts
    # bring each coordinate to the representative closest to the box
    lo = np.asarray(box.lo)
    return lo + np.mod(pts - lo, traj.period)


def in_box(traj: Trajectory, box: BoxNeighborhood, ts) -> np.ndarray:
    """Membership of ``traj`` positions at parameters ``ts`` in ``box`` (torus-aware)."""
    pts = traj.positions(np.atleast_1d(np.asarray(ts, dtype=float)))
    return box.contains_points(_wrap(traj, box, pts))


def quadrature_oracle(traj: Trajectory, box: BoxNeighborhood, window: Interval,
                      step: float, rng: np.random.Generator | None = None,
                      chunk: int = 2_000_000) -> float:
    """Grid estimate ``step * #{grid t in window : t.x in box}``.

    Grid points are cell midpoints, or one uniform point per cell when
    ``rng`` is given.  Jitter matters for torus flows, where a step dividing
    the period makes every midpoint error line up with the same sign.
    """
    return quadrature_oracle_many(traj, [box], window, step, rng, chunk)[0]


def quadrature_oracle_many(traj: Trajectory, boxes, window: Interval, step: float,
                           rng: np.random.Generator | None = None,
                           chunk: int = 2_000_000) -> list[float]:
    """:func:`quadrature_oracle` for several boxes sharing one grid (positions evaluated once)."""
    if not window.is_bounded:
        raise ValueError("quadrature needs a bounded window")
    boxes = list(boxes)
    count = int(math.floor((window.hi - window.lo) / step))
    hits = [0] * len(boxes)
    for start in range(0, count, chunk):
        idx = np.arange(start, min(start + chunk, count))
        offset = 0.5 if rng is None else rng.random(idx.size)
        pts = traj.positions(window.lo + (idx + offset) * step)
        for i, box in enumerate(boxes):
            hits[i] += int(np.count_nonzero(box.contains_points(_wrap(traj, box, pts))))
    return [step * h for h in hits]


@dataclass(frozen=True)
class CompactnessDiagnostic:
    m: int
    bounded: bool
    measure: float | None
    horizons: tuple[float, ...] = ()
    windowed_measures: tuple[float, ...] = ()
    growth_slope: float | None = None


def relative_compactness_probe(traj_z: Trajectory, boxes, horizons=(1e2, 1e3, 1e4)) -> list[CompactnessDiagnostic]:
    """For each box, whether the sojourn set of ``z`` is bounded.

    ``boxes`` is a sequence of boxes (reported with ``m = 1, 2, ...``).
    Unbounded sets are measured on ``[-T, T]`` for every horizon ``T``; the
    growth slope is the least-squares slope of measure against ``2T``.
    """
    out = []
    for m, box in enumerate(boxes, start=1):
        try:
            s = sojourn_set(traj_z, box)
            out.append(CompactnessDiagnostic(m, True, s.measure()))
            continue
        except UnboundedSojourn:
            pass
        hs = tuple(float(T) for T in horizons)
        ms = tuple(sojourn_measure(traj_z, box, Interval.closed(-T, T)) for T in hs)
        slope = None
        if len(hs) >= 2:
            slope = float(np.polyfit(2 * np.asarray(hs), np.asarray(ms), 1)[0])
        out.append(CompactnessDiagnostic(m, False, None, hs, ms, slope))
    return out
