import math
from dataclasses import replace

import numpy as np
import pytest

from orbitstrength.action import (Affine, Segment, Sinusoid, Trajectory, injectivity_probe, make_kronecker,
                                  make_rieffel, make_splice, point_at, repetition_rule, splice_data)
from orbitstrength.geometry import Interval


def test_rieffel_base_points(green):
    np.testing.assert_array_equal(point_at(green.orbit_at(1), 0), [0.25, 0, 0])
    np.testing.assert_array_equal(point_at(green.z, 7), [0, 7, 0])
    for n in (1, 3, 10):
        np.testing.assert_array_equal(green.orbit_at(n).base_point, [2.0 ** (-2 * n), 0, 0])


def test_rieffel_table(alternating):
    # n = 2 has L = 2: lines through b^0, b^1, b^2 with period 2n+1 = 5
    orbit = alternating.orbit_at(2)
    b = [2.0 ** -4 * 2.0 ** (-j / 3) for j in range(3)]
    np.testing.assert_allclose(orbit.point_at(-3), [b[0], -3, 0])
    np.testing.assert_allclose(orbit.point_at(2.5), [(b[0] + b[1]) / 2, 0, 2], atol=1e-12)
    np.testing.assert_allclose(orbit.point_at(5), [b[1], 0, 0])
    np.testing.assert_allclose(orbit.point_at(10 + 40), [b[2], 40, 0])


def test_splice_points(splice):
    orbit = splice[0].orbit_at(1)
    d = splice_data(1)
    np.testing.assert_allclose(orbit.point_at(0), [(d["a"] + d["b"]) / 2, 0, 1])
    # u in [1/2, 2n+1/2): (b_n, u - n - 1/2, 0)
    np.testing.assert_allclose(orbit.point_at(1), [d["b"], -0.5, 0])
    # u in [-2n-1/2, -1/2): (a_n, u + n + 1/2, 0)
    np.testing.assert_allclose(orbit.point_at(-1), [d["a"], 0.5, 0])
    np.testing.assert_allclose(orbit.point_at(100), [d["b1"], 100 - 4.5, 0])
    np.testing.assert_allclose(orbit.point_at(-100), [d["a2"], -100 + 7.5, 0])


def test_splice_shares_orbits(splice):
    x0, z0 = splice
    assert x0.orbit_at(3) is z0.orbit_at(3)
    np.testing.assert_array_equal(z0.z.base_point, [1, 0, 0])


def gallery_trajectories(green, alternating, splice):
    grow = make_rieffel(repetition_rule("grow"))
    yield green.z
    for n in (1, 2, 7):
        yield green.orbit_at(n)
        yield alternating.orbit_at(n)
        yield grow.orbit_at(n)
        yield splice[0].orbit_at(n)


def test_gallery_trajectories_continuous(green, alternating, splice):
    for traj in gallery_trajectories(green, alternating, splice):
        gaps = traj.junction_gaps()
        assert not gaps or max(gaps) < 1e-9, traj.label


def test_vectorized_positions_match_pointwise(green, splice):
    rng = np.random.default_rng(1)
    for traj in (green.orbit_at(3), splice[0].orbit_at(2)):
        starts = [s.domain.lo for s in traj.segments[1:]]
        ts = np.concatenate([rng.uniform(-40, 40, 200), starts])
        pts = traj.positions(ts)
        for t, p in zip(ts, pts):
            np.testing.assert_array_equal(p, traj.point_at(t))


def test_junction_belongs_to_closed_side(green):
    orbit = green.orbit_at(2)
    # (-inf, n] is closed at n = 2: the junction point is on the first line
    assert orbit.segment_index(2.0) == 0
    assert orbit.segment_index(2.0 + 1e-12) == 1


def test_rejects_non_monotone_gaps():
    with pytest.raises(ValueError):
        make_rieffel(repetition_rule("const:1"), b=lambda n: 1.0 / (1 + (n % 3)))
    with pytest.raises(ValueError):
        make_rieffel(repetition_rule("const:1"), b=lambda n: -1.0 / n)


def test_repetition_rules():
    assert [repetition_rule("alt:1,2")(n) for n in range(1, 6)] == [1, 2, 1, 2, 1]
    assert repetition_rule("const:3")(17) == 3
    assert repetition_rule("grow")(9) == 9
    for bad in ("alt:", "const:-1", "grow:2", "sometimes"):
        with pytest.raises(ValueError):
            repetition_rule(bad)


def test_trajectory_must_partition_line():
    line = (Affine(0.0), Affine(0.0, 1.0))
    with pytest.raises(ValueError):
        Trajectory("gap", (Segment(Interval(-math.inf, 0, True, True), line),
                           Segment(Interval(0, math.inf, True, True), line)))
    with pytest.raises(ValueError):
        Trajectory("short", (Segment(Interval(0, math.inf, False, True), line),))
    with pytest.raises(ValueError):
        Sinusoid(1.0, 0.0)


def test_kronecker():
    k = make_kronecker(math.sqrt(2) - 1)
    np.testing.assert_allclose(k.z.point_at(1), [0, math.sqrt(2) - 1], atol=1e-15)
    np.testing.assert_array_equal(k.z.point_at(0), [0, 0])
    assert k.orbit_at(5) is k.z
    for bad in (0.5, 3 / 7, 22 / 97):
        with pytest.raises(ValueError):
            make_kronecker(bad)
    with pytest.raises(ValueError):
        make_kronecker(math.sqrt(2) - 1, dim=3)


def test_injectivity_probe(green):
    assert injectivity_probe(green.orbit_at(1), 1e-3, 20) == []
    assert injectivity_probe(green.z, 1e-3, 20) == []
    # folds back onto itself: position at t > 0 equals the position at -t
    fold = Trajectory("fold", (
        Segment(Interval(-math.inf, 0, True, False), (Affine(0.0, 1.0), Affine(0.0))),
        Segment(Interval(0, math.inf, True, True), (Affine(0.0, -1.0), Affine(0.0))),
    ))
    hits = injectivity_probe(fold, 0.5, 2)
    assert (-2.0, 2.0) in hits and len(hits) == 4


def test_scenario_families(green, splice, kronecker):
    for sc in (green, splice[0], splice[1], kronecker):
        assert sc.check(10) == []
    broken = replace(green, exhaustion_radius=lambda m: 1.0)
    assert any("radius" in p for p in broken.check(3))


def test_orbit_generation_is_pure(green):
    a = green.orbit_at(4)
    b = make_rieffel(repetition_rule("const:1")).orbit_at(4)
    assert a == b
