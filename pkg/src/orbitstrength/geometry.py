"""Real intervals, finite unions of intervals, and axis-aligned boxes.

Endpoints are plain floats (``-inf``/``inf`` allowed).  Openness of every
endpoint is tracked through all set operations but never changes a measure.
The measure of an :class:`IntervalSet` is its Lebesgue measure, which is the
Haar measure of the additive group of reals.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Interval", "IntervalSet", "BoxNeighborhood", "format_number"]

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """A real interval ``lo .. hi`` with per-endpoint openness.

    Infinite endpoints are always open.  An interval with ``lo == hi`` is a
    single point when both ends are closed and empty otherwise.
    """

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo == -INF and not self.lo_open:
            object.__setattr__(self, "lo_open", True)
        if self.hi == INF and not self.hi_open:
            object.__setattr__(self, "hi_open", True)
        if self.lo == INF or self.hi == -INF:
            # (inf, inf) and (-inf, -inf) hold no reals
            object.__setattr__(self, "lo_open", True)
            object.__setattr__(self, "hi_open", True)

    @classmethod
    def open(cls, lo: float, hi: float) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def closed(cls, lo: float, hi: float) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-INF, INF, True, True)

    @property
    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        if self.lo == self.hi:
            return self.lo_open or self.hi_open or math.isinf(self.lo)
        return False

    @property
    def length(self) -> float:
        if self.is_empty:
            return 0.0
        return self.hi - self.lo

    @property
    def is_bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    @property
    def midpoint(self) -> float:
        if not self.is_bounded:
            raise ValueError(f"unbounded interval {self} has no midpoint")
        return 0.5 * (self.lo + self.hi)

    def contains(self, t: float) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and self.lo_open:
            return False
        if t == self.hi and self.hi_open:
            return False
        return True

    def shift(self, t: float) -> "Interval":
        return Interval(self.lo + t, self.hi + t, self.lo_open, self.hi_open)

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{format_number(self.lo)},{format_number(self.hi)}{right}"


# Endpoint keys: lower endpoints sort an open start after a closed one at the
# same location; upper endpoints sort an open end before a closed one.
def _lo_key(iv: Interval) -> tuple[float, int]:
    return (iv.lo, 1 if iv.lo_open else 0)


def _hi_key(iv: Interval) -> tuple[float, int]:
    return (iv.hi, -1 if iv.hi_open else 0)


def _touch_or_overlap(a: Interval, b: Interval) -> bool:
    """True when ``a`` (starting no later than ``b``) and ``b`` union to one interval."""
    if b.lo < a.hi:
        return True
    if b.lo > a.hi:
        return False
    # shared location: merge unless the point itself is missing from both
    return not (a.hi_open and b.lo_open)


def _merge(parts: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted((p for p in parts if not p.is_empty), key=_lo_key)
    out: list[Interval] = []
    for iv in items:
        if out and _touch_or_overlap(out[-1], iv):
            last = out[-1]
            if _hi_key(iv) > _hi_key(last):
                out[-1] = Interval(last.lo, iv.hi, last.lo_open, iv.hi_open)
        else:
            out.append(iv)
    return tuple(out)


class IntervalSet:
    """A normalized finite union of disjoint intervals, sorted by lower endpoint.

    Instances are immutable.  Any iterable of (possibly overlapping or empty)
    intervals is accepted and normalized on construction.
    """

    __slots__ = ("_parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        self._parts = _merge(parts)

    @classmethod
    def _raw(cls, parts: Sequence[Interval]) -> "IntervalSet":
        # caller guarantees normalization
        obj = cls.__new__(cls)
        obj._parts = tuple(parts)
        return obj

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls._raw(())

    @classmethod
    def of(cls, *parts: Interval) -> "IntervalSet":
        return cls(parts)

    @property
    def parts(self) -> tuple[Interval, ...]:
        return self._parts

    def __iter__(self):
        return iter(self._parts)

    def __len__(self) -> int:
        return len(self._parts)

    def __bool__(self) -> bool:
        return bool(self._parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self) -> int:
        return hash(self._parts)

    def __repr__(self) -> str:
        return f"IntervalSet({self})"

    def __str__(self) -> str:
        if not self._parts:
            return "{}"
        return ",".join(str(p) for p in self._parts)

    @property
    def is_empty(self) -> bool:
        return not self._parts

    @property
    def is_bounded(self) -> bool:
        return all(p.is_bounded for p in self._parts)

    def measure(self) -> float:
        """Lebesgue measure; ``inf`` if any part is unbounded."""
        if not self.is_bounded:
            return INF
        return math.fsum(p.hi - p.lo for p in self._parts)

    def contains(self, t: float) -> bool:
        return any(p.contains(t) for p in self._parts)

    def normalize(self) -> "IntervalSet":
        return IntervalSet(self._parts)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._parts + other._parts)

    __or__ = union

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        a, b = self._parts, other._parts
        out: list[Interval] = []
        i = j = 0
        while i < len(a) and j < len(b):
            x, y = a[i], b[j]
            lo_src = x if _lo_key(x) >= _lo_key(y) else y
            hi_src = x if _hi_key(x) <= _hi_key(y) else y
            iv = Interval(lo_src.lo, hi_src.hi, lo_src.lo_open, hi_src.hi_open)
            if not iv.is_empty:
                out.append(iv)
            if _hi_key(x) < _hi_key(y):
                i += 1
            else:
                j += 1
        return IntervalSet._raw(out)

    __and__ = intersect

    def complement(self) -> "IntervalSet":
        out: list[Interval] = []
        lo, lo_open = -INF, True
        for p in self._parts:
            out.append(Interval(lo, p.lo, lo_open, not p.lo_open))
            lo, lo_open = p.hi, not p.hi_open
        out.append(Interval(lo, INF, lo_open, True))
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        if not other._parts:
            return self
        return self.intersect(other.complement())

    __sub__ = difference

    def issubset(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty

    def translate(self, t: float) -> "IntervalSet":
        return IntervalSet._raw([p.shift(t) for p in self._parts])

    def subtract_translates(self, centers: Iterable[float], radius: float) -> "IntervalSet":
        """Remove the closed balls ``[c - radius, c + radius]`` for every center."""
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        balls = IntervalSet(Interval.closed(c - radius, c + radius) for c in centers)
        return self.difference(balls)

    def fatten(self, margin: float) -> "IntervalSet":
        """Open ``margin``-neighbourhood of the set."""
        if margin <= 0:
            raise ValueError("margin must be positive")
        return IntervalSet(Interval.open(p.lo - margin, p.hi + margin) for p in self._parts)

    def closure(self) -> "IntervalSet":
        return IntervalSet(Interval(p.lo, p.hi, math.isinf(p.lo), math.isinf(p.hi))
                           for p in self._parts)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Inverse of ``str``: ``"(0,1),[2,5]"``; ``""`` or ``"{}"`` is empty."""
        text = text.strip()
        if text in ("", "{}"):
            return cls.empty()
        parts = []
        pos = 0
        for match in _PART_RE.finditer(text):
            if text[pos:match.start()].strip(" ,"):
                raise ValueError(f"cannot parse interval set {text!r}")
            left, lo, hi, right = match.groups()
            parts.append(Interval(float(lo), float(hi), left == "(", right == ")"))
            pos = match.end()
        if text[pos:].strip(" ,") or not parts:
            raise ValueError(f"cannot parse interval set {text!r}")
        return cls(parts)


_NUM = r"\s*([-+]?(?:inf|[0-9.]+(?:[eE][-+]?[0-9]+)?))\s*"
_PART_RE = re.compile(r"([\[(])" + _NUM + "," + _NUM + r"([\])])")


def format_number(x: float) -> str:
    """Shortest round-trip decimal; integral values print without a decimal point."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


class BoxNeighborhood:
    """Axis-aligned box in R^d with per-face openness.

    ``lo_open[i]`` / ``hi_open[i]`` say whether the lower / upper face in
    coordinate ``i`` is excluded.  Boxes default to closed (compact).
    """

    __slots__ = ("lo", "hi", "lo_open", "hi_open")

    def __init__(self, lo, hi, lo_open=None, hi_open=None):
        lo = tuple(float(v) for v in lo)
        hi = tuple(float(v) for v in hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("box bounds must be nonempty and of equal length")
        if any(not (a < b) for a, b in zip(lo, hi)):
            raise ValueError(f"box must have nonempty interior: lo={lo}, hi={hi}")
        d = len(lo)
        self.lo = lo
        self.hi = hi
        self.lo_open = tuple(bool(v) for v in lo_open) if lo_open is not None else (False,) * d
        self.hi_open = tuple(bool(v) for v in hi_open) if hi_open is not None else (False,) * d
        if len(self.lo_open) != d or len(self.hi_open) != d:
            raise ValueError("face flags must match the box dimension")

    @classmethod
    def closed(cls, lo, hi) -> "BoxNeighborhood":
        return cls(lo, hi)

    @classmethod
    def open(cls, lo, hi) -> "BoxNeighborhood":
        d = len(lo)
        return cls(lo, hi, (True,) * d, (True,) * d)

    @classmethod
    def centered(cls, center, half_widths, open: bool = False) -> "BoxNeighborhood":
        c = np.asarray(center, dtype=float)
        w = np.broadcast_to(np.asarray(half_widths, dtype=float), c.shape)
        make = cls.open if open else cls.closed
        return make(c - w, c + w)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoxNeighborhood):
            return NotImplemented
        return (self.lo, self.hi, self.lo_open, self.hi_open) == (
            other.lo, other.hi, other.lo_open, other.hi_open)

    def __hash__(self) -> int:
        return hash((self.lo, self.hi, self.lo_open, self.hi_open))

    def __repr__(self) -> str:
        faces = " x ".join(str(self.face_interval(i)) for i in range(self.dim))
        return f"BoxNeighborhood({faces})"

    def face_interval(self, i: int) -> Interval:
        return Interval(self.lo[i], self.hi[i], self.lo_open[i], self.hi_open[i])

    def contains(self, point) -> bool:
        return all(self.face_interval(i).contains(float(x)) for i, x in enumerate(point))

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for an ``(N, d)`` array of points."""
        points = np.asarray(points, dtype=float)
        mask = np.ones(points.shape[0], dtype=bool)
        for i in range(self.dim):
            col = points[:, i]
            mask &= (col > self.lo[i]) if self.lo_open[i] else (col >= self.lo[i])
            mask &= (col < self.hi[i]) if self.hi_open[i] else (col <= self.hi[i])
        return mask

    def interior_contains(self, point) -> bool:
        return all(a < float(x) < b for a, b, x in zip(self.lo, self.hi, point))

    def closure(self) -> "BoxNeighborhood":
        return BoxNeighborhood(self.lo, self.hi)

    def interior(self) -> "BoxNeighborhood":
        return BoxNeighborhood.open(self.lo, self.hi)

    def issubset(self, other: "BoxNeighborhood") -> bool:
        for i in range(self.dim):
            if self.lo[i] < other.lo[i] or self.hi[i] > other.hi[i]:
                return False
            if self.lo[i] == other.lo[i] and other.lo_open[i] and not self.lo_open[i]:
                return False
            if self.hi[i] == other.hi[i] and other.hi_open[i] and not self.hi_open[i]:
                return False
        return True

    def scaled_about(self, center, factor: float, open: bool = True) -> "BoxNeighborhood":
        """Homothetic copy ``center + factor * (box - center)``."""
        if not 0 < factor:
            raise ValueError("scale factor must be positive")
        c = np.asarray(center, dtype=float)
        lo = c + factor * (np.asarray(self.lo) - c)
        hi = c + factor * (np.asarray(self.hi) - c)
        return BoxNeighborhood.open(lo, hi) if open else BoxNeighborhood.closed(lo, hi)
