"""Piecewise parametrized orbits ``t -> t.x`` of one-parameter flows on R^d.

A :class:`Trajectory` is a list of :class:`Segment` objects whose domains
partition the real line.  On each segment every coordinate is either affine
or sinusoidal in the local parameter ``s = t - origin``.  Constructors for the
gallery actions live at the bottom of the module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .geometry import BoxNeighborhood, Interval

__all__ = [
    "Affine", "Sinusoid", "Segment", "Trajectory", "Scenario",
    "point_at", "injectivity_probe",
    "make_rieffel", "make_green", "make_proper", "make_splice", "make_kronecker",
    "repetition_rule", "CONTINUITY_TOL",
]

CONTINUITY_TOL = 1e-9


@dataclass(frozen=True)
class Affine:
    """Coordinate ``a + b*s``."""

    a: float
    b: float = 0.0

    def __call__(self, s):
        return self.a + self.b * s


@dataclass(frozen=True)
class Sinusoid:
    """Coordinate ``offset + amplitude*sin(rate*s + phase)``."""

    amplitude: float
    rate: float
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.rate == 0:
            raise ValueError("sinusoidal component needs a nonzero angular rate")

    def __call__(self, s):
        return self.offset + self.amplitude * np.sin(self.rate * s + self.phase)


Component = Union[Affine, Sinusoid]


@dataclass(frozen=True)
class Segment:
    domain: Interval
    components: tuple[Component, ...]
    origin: float = 0.0

    def __post_init__(self):
        if self.domain.is_empty:
            raise ValueError("segment domain must be nonempty")
        object.__setattr__(self, "components", tuple(self.components))

    def position(self, t: float) -> np.ndarray:
        s = t - self.origin
        return np.array([float(c(s)) for c in self.components])


@dataclass(frozen=True)
class Trajectory:
    """Parametrized orbit; ``period`` wraps every coordinate onto a torus R^d/(period Z)^d."""

    label: str
    segments: tuple[Segment, ...]
    period: float | None = None
    _starts: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("trajectory needs at least one segment")
        dims = {len(s.components) for s in segs}
        if len(dims) != 1:
            raise ValueError("all segments must have the same number of components")
        if segs[0].domain.lo != -math.inf or segs[-1].domain.hi != math.inf:
            raise ValueError("segment domains must cover the whole real line")
        for left, right in zip(segs, segs[1:]):
            if left.domain.hi != right.domain.lo or left.domain.hi_open == right.domain.lo_open:
                raise ValueError(
                    f"segments {left.domain} and {right.domain} do not abut exactly")
        object.__setattr__(self, "_starts", np.array([s.domain.lo for s in segs[1:]]))

    @property
    def dim(self) -> int:
        return len(self.segments[0].components)

    def segment_index(self, t: float) -> int:
        i = int(np.searchsorted(self._starts, t, side="right"))
        # t equal to a junction belongs to whichever side holds it closed
        if i > 0 and t == self._starts[i - 1] and self.segments[i].domain.lo_open:
            i -= 1
        return i

    def point_at(self, t: float) -> np.ndarray:
        p = self.segments[self.segment_index(t)].position(t)
        return self.wrap(p)

    def wrap(self, points):
        if self.period is None:
            return points
        return np.mod(points, self.period)

    def positions(self, ts: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an array of parameters; returns ``(N, d)``."""
        ts = np.asarray(ts, dtype=float)
        out = np.empty((ts.size, self.dim))
        idx = np.searchsorted(self._starts, ts, side="right")
        if len(self._starts):
            at_junction = (idx > 0) & (ts == self._starts[np.maximum(idx - 1, 0)])
            if at_junction.any():
                lo_open = np.array([s.domain.lo_open for s in self.segments])
                idx = np.where(at_junction & lo_open[idx], idx - 1, idx)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if not mask.any():
                continue
            s = ts[mask] - seg.origin
            for j, comp in enumerate(seg.components):
                out[mask, j] = comp(s)
        return self.wrap(out)

    def junction_gaps(self) -> list[float]:
        """Position jumps at every segment junction (continuity check)."""
        gaps = []
        for left, right in zip(self.segments, self.segments[1:]):
            t = left.domain.hi
            gaps.append(float(np.max(np.abs(left.position(t) - right.position(t)))))
        return gaps

    @property
    def base_point(self) -> np.ndarray:
        return self.point_at(0.0)


def point_at(traj: Trajectory, t: float) -> np.ndarray:
    return traj.point_at(t)


@dataclass(frozen=True)
class Scenario:
    """A limit point ``z``, a sequence of orbits and a shrinking box family.

    ``orbit_at(n)`` returns the trajectory through ``x_n`` (n >= 1);
    ``neighborhoods(m)`` returns ``W_m`` (m >= 1); ``exhaustion_radius(m)``
    is the radius ``r`` of ``K_m = [-r, r]``.
    """

    name: str
    z: Trajectory
    orbit_at: Callable[[int], Trajectory]
    neighborhoods: Callable[[int], BoxNeighborhood]
    exhaustion_radius: Callable[[int], float] = float
    windowed: bool = False
    metadata: dict = field(default_factory=dict)

    def check(self, m_max: int) -> list[str]:
        """Structural problems with the box family up to ``m_max`` (empty when fine)."""
        problems = []
        base = self.z.base_point
        prev_r = 0.0
        for m in range(1, m_max + 1):
            box = self.neighborhoods(m)
            if not box.interior_contains(base):
                problems.append(f"W_{m} does not contain z in its interior")
            if m > 1 and not box.issubset(self.neighborhoods(m - 1)):
                problems.append(f"W_{m} is not contained in W_{m - 1}")
            r = self.exhaustion_radius(m)
            if not r > prev_r:
                problems.append(f"exhaustion radius not increasing at m={m}")
            prev_r = r
        return problems


def injectivity_probe(traj: Trajectory, grid_step: float, horizon: float,
                      tol: float = 1e-9, min_separation: float = 1e-6) -> list[tuple[float, float]]:
    """Grid pairs ``(t, t')`` with ``|t - t'| > min_separation`` landing on the same point.

    An empty list means no violation of injectivity was found on the grid.
    """
    count = int(round(2 * horizon / grid_step)) + 1
    ts = -horizon + grid_step * np.arange(count)
    pts = traj.positions(ts)
    pairs = cKDTree(pts).query_pairs(r=tol, output_type="ndarray")
    hits = []
    for i, j in pairs:
        if abs(ts[i] - ts[j]) > min_separation:
            hits.append((float(ts[i]), float(ts[j])))
    return sorted(hits)


# ---------------------------------------------------------------------------
# gallery constructors

def _line(x: float, origin: float, domain: Interval, z: float = 0.0) -> Segment:
    """Vertical line ``(x, s, z)`` parallel to the y-axis, s = t - origin."""
    return Segment(domain, (Affine(x), Affine(0.0, 1.0), Affine(z)), origin)


def _arc(x_from: float, x_to: float, radius: float, origin: float, domain: Interval) -> Segment:
    """Half circle ``(x, r cos(pi s), r sin(pi s))`` for s in [0, 1], x moving affinely."""
    return Segment(domain, (
        Affine(x_from, x_to - x_from),
        Sinusoid(radius, math.pi, math.pi / 2),
        Sinusoid(radius, math.pi, 0.0),
    ), origin)


def _canonical_boxes(center_x: float) -> Callable[[int], BoxNeighborhood]:
    def box(m: int) -> BoxNeighborhood:
        w = 2.0 ** -m
        return BoxNeighborhood.closed((center_x - w, -w / 2, -w / 2), (center_x + w, w / 2, w / 2))
    return box


def default_gaps(n: int) -> float:
    return 2.0 ** (-2 * n)


def repetition_rule(text: str) -> Callable[[int], int]:
    """Parse ``const:c``, ``alt:a,b,...`` or ``grow`` into ``n -> L_n``."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    if kind == "const" and arg:
        c = int(arg)
        if c < 0:
            raise ValueError("repetition integers must be nonnegative")
        return lambda n: c
    if kind == "alt" and arg:
        cycle = tuple(int(v) for v in arg.split(","))
        if any(v < 0 for v in cycle):
            raise ValueError("repetition integers must be nonnegative")
        return lambda n: cycle[(n - 1) % len(cycle)]
    if kind == "grow" and not arg:
        return lambda n: n
    raise ValueError(f"unknown repetition rule {text!r}")


def make_rieffel(L: Callable[[int], int], b: Callable[[int], float] = default_gaps,
                 name: str = "rieffel", check_terms: int = 64) -> Scenario:
    """Rieffel's folded-orbit example in R^3.

    Orbit ``n`` consists of ``L(n) + 1`` lines parallel to the y-axis through
    ``(b_n^j, 0, 0)``, joined by half circles of radius ``n``; the limit orbit
    is the y-axis.  ``b_n^j = b_n * 2**(-j/(L_n+1))``.
    """
    prev = math.inf
    for n in range(1, check_terms + 1):
        bn = b(n)
        if not 0 < bn < prev:
            raise ValueError(f"gap rule must be positive and strictly decreasing (fails at n={n})")
        prev = bn

    @lru_cache(maxsize=None)
    def orbit_at(n: int) -> Trajectory:
        if n < 1:
            raise ValueError("orbit index starts at 1")
        Ln = int(L(n))
        if Ln < 0:
            raise ValueError(f"L_{n} must be nonnegative")
        bn, b_next = b(n), b(n + 1)
        xs = [bn * 2.0 ** (-j / (Ln + 1)) for j in range(Ln + 1)]
        if not all(u > v for u, v in zip(xs, xs[1:])) or xs[-1] <= b_next:
            raise ValueError(f"folds of orbit {n} do not interleave with b_{n + 1}")
        if Ln == 0:
            return Trajectory(f"x_{n}", (_line(bn, 0.0, Interval.real_line()),))
        period = 2 * n + 1
        segs = [_line(xs[0], 0.0, Interval(-math.inf, n, True, False))]
        for j in range(Ln):
            start = n + j * period
            segs.append(_arc(xs[j], xs[j + 1], n, start, Interval(start, start + 1, True, False)))
            line_origin = (j + 1) * period
            if j + 1 < Ln:
                dom = Interval(line_origin - n, line_origin + n, True, False)
            else:
                dom = Interval(line_origin - n, math.inf, True, True)
            segs.append(_line(xs[j + 1], line_origin, dom))
        return Trajectory(f"x_{n}", tuple(segs))

    z = Trajectory("x_0", (_line(0.0, 0.0, Interval.real_line()),))
    return Scenario(
        name=name, z=z, orbit_at=orbit_at, neighborhoods=_canonical_boxes(0.0),
        metadata={"family": "rieffel", "L": L, "b": b,
                  "note": "b_n = 2^-2n and b_n^j = b_n 2^(-j/(L_n+1)) are default choices"},
    )


def make_green() -> Scenario:
    return make_rieffel(repetition_rule("const:1"), name="green")


def make_proper() -> Scenario:
    return make_rieffel(repetition_rule("const:0"), name="proper")


def rieffel_canonical_box() -> BoxNeighborhood:
    """``[0,1) x (-1/2,1/2) x (-1/2,1/2)``."""
    return BoxNeighborhood((0.0, -0.5, -0.5), (1.0, 0.5, 0.5),
                           lo_open=(False, True, True), hi_open=(True, True, True))


def splice_data(n: int) -> dict[str, float]:
    return {
        "b": 2.0 ** (-2 * n), "b1": 2.0 ** (-(2 * n + 1)),
        "a": 1 - 2.0 ** (-3 * n), "a1": 1 - 2.0 ** (-(3 * n + 1)), "a2": 1 - 2.0 ** (-(3 * n + 2)),
    }


@lru_cache(maxsize=None)
def splice_orbit(n: int) -> Trajectory:
    """Orbit ``n`` of the two-limit splice: two strands near x=0, three near x=1."""
    if n < 1:
        raise ValueError("orbit index starts at 1")
    d = splice_data(n)
    a, a1, a2, b, b1 = d["a"], d["a1"], d["a2"], d["b"], d["b1"]
    h = 0.5
    segs = [
        _line(a2, -5 * n - 5 * h, Interval(-math.inf, -4 * n - 5 * h, True, True)),
        _arc(a2, a1, n, -4 * n - 5 * h, Interval(-4 * n - 5 * h, -4 * n - 3 * h, False, True)),
        _line(a1, -3 * n - 3 * h, Interval(-4 * n - 3 * h, -2 * n - 3 * h, False, True)),
        _arc(a1, a, n, -2 * n - 3 * h, Interval(-2 * n - 3 * h, -2 * n - h, False, True)),
        _line(a, -n - h, Interval(-2 * n - h, -h, False, True)),
        # middle arc: (a + (u+1/2)(b-a), -n sin(pi u), n cos(pi u)) for u in [-1/2, 1/2)
        Segment(Interval(-h, h, False, True), (
            Affine(a + (b - a) / 2, b - a),
            Sinusoid(-n, math.pi, 0.0),
            Sinusoid(n, math.pi, math.pi / 2),
        ), 0.0),
        _line(b, n + h, Interval(h, 2 * n + h, False, True)),
        _arc(b, b1, n, 2 * n + h, Interval(2 * n + h, 2 * n + 3 * h, False, True)),
        _line(b1, 3 * n + 3 * h, Interval(2 * n + 3 * h, math.inf, False, True)),
    ]
    return Trajectory(f"x_{n}", tuple(segs))


def make_splice() -> tuple[Scenario, Scenario]:
    """The two-limit splice, analysed at ``x_0 = (0,0,0)`` and at ``z_0 = (1,0,0)``."""
    x0 = Trajectory("x_0", (_line(0.0, 0.0, Interval.real_line()),))
    z0 = Trajectory("z_0", (_line(1.0, 0.0, Interval.real_line()),))
    meta = {"family": "splice",
            "note": "boxes around each limit are small enough to separate the two limits"}
    return (
        Scenario("splice-x0", x0, splice_orbit, _canonical_boxes(0.0), metadata=dict(meta)),
        Scenario("splice-z0", z0, splice_orbit, _canonical_boxes(1.0), metadata=dict(meta)),
    )


def make_kronecker(slope: float = math.sqrt(2) - 1, dim: int = 2) -> Scenario:
    """Linear flow ``t -> (t, slope*t) mod 1`` on the 2-torus.

    The orbit of the origin is dense, hence not locally closed; the sequence
    of orbits is the constant sequence ``z, z, z, ...``.
    """
    if dim != 2:
        raise ValueError("only the 2-torus flow is provided")
    approx = Fraction(slope).limit_denominator(100)
    if abs(slope - float(approx)) < 1e-12:
        raise ValueError(f"slope {slope!r} is (numerically) rational: {approx}")
    z = Trajectory("z", (Segment(Interval.real_line(), (Affine(0.0, 1.0), Affine(0.0, slope))),),
                   period=1.0)

    def box(m: int) -> BoxNeighborhood:
        return BoxNeighborhood.centered((0.0, 0.0), 0.05 * 2.0 ** (1 - m))

    return Scenario("kronecker", z, lambda n: z, box, windowed=True,
                    metadata={"family": "kronecker", "slope": slope})
