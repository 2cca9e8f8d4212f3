import math

import numpy as np
import pytest

from orbitstrength.action import make_rieffel, repetition_rule, rieffel_canonical_box
from orbitstrength.geometry import BoxNeighborhood, Interval, IntervalSet
from orbitstrength.sojourn import (UnboundedSojourn, in_box, quadrature_oracle, relative_compactness_probe,
                                   sojourn_measure, sojourn_set)
from orbitstrength.suite import random_boxes

V = rieffel_canonical_box()


def test_canonical_box_z_line(green):
    assert sojourn_set(green.z, V) == IntervalSet.of(Interval.open(-0.5, 0.5))
    assert sojourn_measure(green.z, V) == 1


@pytest.mark.parametrize("L", [0, 1, 2, 4])
def test_constant_folds_give_translated_copies(L):
    sc = make_rieffel(repetition_rule(f"const:{L}"))
    for n in (1, 2, 6, 15):
        s = sojourn_set(sc.orbit_at(n), V)
        expected = IntervalSet(Interval.open(-0.5 + j * (2 * n + 1), 0.5 + j * (2 * n + 1)) for j in range(L + 1))
        assert s == expected
        assert len(s) == L + 1
        assert sojourn_measure(sc.orbit_at(n), V) == L + 1


def test_disjoint_box_is_empty(green):
    far = BoxNeighborhood.closed((5, 5, 5), (6, 6, 6))
    assert sojourn_set(green.orbit_at(3), far).is_empty
    assert quadrature_oracle(green.orbit_at(3), far, Interval.closed(-50, 50), 1e-3) == 0


def test_quadrature_oracle_on_z_line(green):
    est = quadrature_oracle(green.z, V, Interval.closed(-10, 10), 1e-4)
    assert abs(est - 1.0) <= 2e-4


def test_splice_z0_three_strands(splice):
    x0, z0 = splice
    window = Interval.closed(-200, 200)
    for m in (1, 3):
        box = z0.neighborhoods(m)
        for n in (5, 20):
            # independent route: count grid points on the orbit inside the box
            oracle = quadrature_oracle(z0.orbit_at(n), box, window, 1e-5)
            nu_z = sojourn_measure(z0.z, box)
            assert abs(oracle - 3 * nu_z) < 1e-4
            assert sojourn_measure(z0.orbit_at(n), box) == 3 * nu_z


def test_arcs_solved_in_closed_form(green, splice):
    """Boxes placed on the half circles: exact sets agree with direct membership."""
    rng = np.random.default_rng(7)
    trajs = [green.orbit_at(1), green.orbit_at(2), splice[0].orbit_at(1), splice[0].orbit_at(2)]
    for traj in trajs:
        arcs = [s for s in traj.segments if s.domain.is_bounded and s.components[1].__class__.__name__ == "Sinusoid"]
        for seg in arcs:
            for _ in range(5):
                t = rng.uniform(seg.domain.lo, seg.domain.hi)
                box = BoxNeighborhood.centered(traj.point_at(t), rng.uniform(0.05, 1.5, 3))
                window = Interval.closed(seg.domain.lo - 3, seg.domain.hi + 3)
                s = sojourn_set(traj, box, window)
                ts = rng.uniform(window.lo, window.hi, 4000)
                inside = in_box(traj, box, ts)
                ends = np.array([e for p in s for e in (p.lo, p.hi)])
                for u, flag in zip(ts, inside):
                    if ends.size and np.min(np.abs(ends - u)) < 1e-9:
                        continue
                    assert s.contains(u) == flag, (traj.label, box, u)
                est = quadrature_oracle(traj, box, window, 1e-4)
                assert abs(s.measure() - est) <= 1e-4 * (2 + len(s))


def test_exact_vs_oracle_property(green, alternating, splice):
    rng = np.random.default_rng(3)
    window = Interval.closed(-40, 40)
    for traj in (green.z, green.orbit_at(2), alternating.orbit_at(3), splice[1].orbit_at(2)):
        for box in random_boxes(traj, rng, 20, window):
            s = sojourn_set(traj, box, window)
            est = quadrature_oracle(traj, box, window, 1e-3)
            assert abs(s.measure() - est) <= 1e-3 * (2 + len(s))


def test_monotone_in_box(green):
    rng = np.random.default_rng(5)
    orbit = green.orbit_at(2)
    for _ in range(20):
        c = orbit.point_at(rng.uniform(-10, 10))
        w = rng.uniform(0.05, 1.0, 3)
        small = BoxNeighborhood.centered(c, w)
        big = BoxNeighborhood.centered(c, w * rng.uniform(1.0, 2.0, 3))
        assert sojourn_set(orbit, small).issubset(sojourn_set(orbit, big))


def test_positive_at_base_point(green, splice):
    for sc in (green, splice[0], splice[1]):
        for m in range(1, 6):
            s = sojourn_set(sc.z, sc.neighborhoods(m))
            assert any(p.lo < 0 < p.hi for p in s)
            assert s.measure() > 0


def test_open_box_gives_open_intervals(green):
    s = sojourn_set(green.z, BoxNeighborhood.open((-1, -1, -1), (1, 1, 1)))
    assert s.parts[0].lo_open and s.parts[0].hi_open
    s = sojourn_set(green.z, BoxNeighborhood.closed((-1, -1, -1), (1, 1, 1)))
    assert not s.parts[0].lo_open


def test_unbounded_sojourn_detection(green, kronecker):
    slab = BoxNeighborhood.closed((-1, -1e9, -1), (1, 1e9, 1))
    # the y-axis runs through a slab that is wide in y
    assert sojourn_measure(green.z, slab) == 2e9
    with pytest.raises(UnboundedSojourn):
        sojourn_set(kronecker.z, kronecker.neighborhoods(1))
    with pytest.raises(UnboundedSojourn):
        sojourn_measure(kronecker.z, kronecker.neighborhoods(1))


def test_provably_infinite_constant_segment():
    from orbitstrength.action import Affine, Segment, Trajectory
    # parked at the origin for t <= 0, then moving away
    traj = Trajectory("parked", (
        Segment(Interval(-math.inf, 0, True, False), (Affine(0.0), Affine(0.0))),
        Segment(Interval(0, math.inf, True, True), (Affine(0.0, 1.0), Affine(0.0))),
    ))
    box = BoxNeighborhood.closed((-1, -1), (1, 1))
    with pytest.raises(UnboundedSojourn) as exc:
        sojourn_set(traj, box)
    assert exc.value.provably_infinite
    assert sojourn_measure(traj, box) == math.inf
    assert sojourn_measure(traj, box, Interval.closed(-10, 10)) == 11


def test_kronecker_windowed_measure(kronecker):
    box = kronecker.neighborhoods(1)
    T = 1000.0
    window = Interval.closed(-T, T)
    rng = np.random.default_rng(11)
    oracle = quadrature_oracle(kronecker.z, box, window, 1e-3, rng)
    assert abs(oracle - 0.01 * 2 * T) < 0.1 * 0.01 * 2 * T
    exact = sojourn_measure(kronecker.z, box, window)
    assert abs(exact - oracle) < 0.05
    assert abs(exact - 0.01 * 2 * T) < 0.1 * 0.01 * 2 * T


def test_relative_compactness_probe(green, proper, kronecker):
    for sc in (green, proper):
        diags = relative_compactness_probe(sc.z, [sc.neighborhoods(m) for m in range(1, 5)])
        assert all(d.bounded for d in diags)
    diags = relative_compactness_probe(kronecker.z, [kronecker.neighborhoods(1)], (1000, 2000, 4000))
    d = diags[0]
    assert not d.bounded
    assert abs(d.growth_slope - 0.01) < 0.001
    assert abs(d.windowed_measures[1] / d.windowed_measures[0] - 2) < 0.2
