import math

import pytest
from hypothesis import given, settings, strategies as st

from mosim import Rel, SceneConfig, contact_relation, surface_distance, tick
from mosim.errors import ImmobileThemeError, UnsupportedShapePair
from mosim.kinematics import (
    Body,
    WorldState,
    hnorm,
    refresh_contacts,
    resolve_goal_contact,
    vnorm,
    vsub,
)
from mosim.lexicon import Shape

FLOOR = Body(id="floor", shape=Shape.PLANE, dimensions=(), mobile=False,
             position=(0.0, 0.0, 0.0))
# same geometry the builtin lexicon gives the wall: 4 wide, 2 tall, 0.2 deep
WALL = Body(id="wall", shape=Shape.BOX, dimensions=(4.0, 2.0, 0.2), mobile=False,
            position=(5.0, 1.0, 0.0))


def ball_at(pos, r=0.5, **kw):
    return Body(id="ball", shape=Shape.SPHERE, dimensions=(r,), mobile=True,
                position=pos, **kw)


def world(*bodies, cfg=None):
    cfg = cfg or SceneConfig(seed=0)
    return refresh_contacts(
        WorldState(0.0, 0, {b.id: b for b in bodies}, cfg)
    )


def box_surface_points(box: Body, per_axis: int = 60):
    """Brute-force sample of points on all six faces of an axis-aligned box."""
    hx, hy, hz = box.half_extents
    cx, cy, cz = box.position
    points = []
    def rng(c, h):
        return [c - h + 2 * h * i / (per_axis - 1) for i in range(per_axis)]
    for x in (cx - hx, cx + hx):
        points += [(x, y, z) for y in rng(cy, hy) for z in rng(cz, hz)]
    for y in (cy - hy, cy + hy):
        points += [(x, y, z) for x in rng(cx, hx) for z in rng(cz, hz)]
    for z in (cz - hz, cz + hz):
        points += [(x, y, z) for x in rng(cx, hx) for y in rng(cy, hy)]
    return points


WALL_SURFACE = box_surface_points(WALL)


def oracle_sphere_box(center, r, box):
    inside = all(abs(center[i] - box.position[i]) <= box.half_extents[i] for i in range(3))
    best = min(vnorm(vsub(center, p)) for p in box.surface_points)
    return (-best if inside else best) - r


class _OracleBox:
    position = WALL.position
    half_extents = WALL.half_extents
    surface_points = WALL_SURFACE


def test_sphere_plane_touching():
    assert surface_distance(ball_at((0, 0.5, 0)), FLOOR) == 0.0


def test_sphere_plane_above():
    assert surface_distance(ball_at((0, 1.5, 0)), FLOOR) == pytest.approx(1.0)


def test_sphere_box_touching_wall_face():
    # center 0.5 m from the x=4.9 face plane: exactly touching
    assert surface_distance(ball_at((4.4, 0.5, 0)), WALL) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("center", [
    (4.0, 0.5, 0.0),    # frontal approach
    (4.4, 0.5, 0.0),    # touching
    (4.6, 2.4, 0.0),    # near the top edge
    (4.5, 1.0, 2.3),    # near the side edge
    (0.0, 3.5, 0.0),    # far corner region
])
def test_sphere_box_against_point_sampling_oracle(center):
    got = surface_distance(ball_at(center), WALL)
    want = oracle_sphere_box(center, 0.5, _OracleBox)
    # oracle resolution is limited by the sampling grid
    assert got == pytest.approx(want, abs=0.05)


def test_box_plane_distance():
    assert surface_distance(WALL, FLOOR) == pytest.approx(0.0)
    raised = Body(id="crate", shape=Shape.BOX, dimensions=(1, 1, 1), mobile=True,
                  position=(0.0, 1.5, 0.0))
    assert surface_distance(raised, FLOOR) == pytest.approx(1.0)


def test_sphere_sphere_distance():
    a = ball_at((0, 0.5, 0))
    b = Body(id="bird", shape=Shape.SPHERE, dimensions=(0.2,), mobile=True,
             position=(1.0, 0.5, 0.0))
    assert surface_distance(a, b) == pytest.approx(0.3)


def test_plane_plane_unsupported():
    other = Body(id="sheet", shape=Shape.PLANE, dimensions=(), mobile=False,
                 position=(0, 0, 0))
    with pytest.raises(UnsupportedShapePair):
        surface_distance(FLOOR, other)


def test_contact_relation_thresholds():
    eps = 1e-3
    assert contact_relation(ball_at((0, 0.5, 0)), FLOOR, eps) is Rel.EC
    assert contact_relation(ball_at((0, 1.5, 0)), FLOOR, eps) is Rel.DC
    assert contact_relation(ball_at((0, 0.49, 0)), FLOOR, eps) is Rel.PO


def test_roll_tick_translates_and_rotates():
    cfg = SceneConfig(seed=0, dt=0.1, speed=1.0)
    w = world(FLOOR, ball_at((0, 0.5, 0)), cfg=cfg)
    w2 = tick(w, "roll", "ball", (1, 0, 0), cfg)
    ball = w2.body("ball")
    assert ball.position == pytest.approx((0.1, 0.5, 0.0))
    assert ball.rotation == pytest.approx(0.2)  # s = r * theta


def test_slide_tick_translates_without_rotation():
    cfg = SceneConfig(seed=0, dt=0.1, speed=1.0)
    w = world(FLOOR, ball_at((0, 0.5, 0)), cfg=cfg)
    w2 = tick(w, "slide", "ball", (1, 0, 0), cfg)
    ball = w2.body("ball")
    assert ball.position == pytest.approx((0.1, 0.5, 0.0))
    assert ball.rotation == 0.0


def test_tick_rejects_immobile_theme():
    w = world(FLOOR, WALL)
    with pytest.raises(ImmobileThemeError):
        tick(w, "roll", "wall", (1, 0, 0))


def test_tick_time_advances_by_exactly_dt():
    cfg = SceneConfig(seed=0)
    w = world(FLOOR, ball_at((0, 0.5, 0)), cfg=cfg)
    for i in range(1, 50):
        w = tick(w, "slide", "ball", (1, 0, 0), cfg)
        assert w.tick_index == i
        assert w.time == pytest.approx(i * cfg.dt, abs=1e-12)


def test_bounce_apex_ratio_matches_restitution_energy_oracle():
    # oracle: each rebound scales speed by e, so apex gaps scale by e^2
    cfg = SceneConfig(seed=0)
    w = world(FLOOR, ball_at((0.0, 2.5, 0.0)), cfg=cfg)  # 2 m drop
    ys = [w.body("ball").position[1]]
    for _ in range(400):
        w = tick(w, "bounce", "ball", (1, 0, 0), cfg)
        ys.append(w.body("ball").position[1])
    apexes = [ys[i] - 0.5 for i in range(1, len(ys) - 1)
              if ys[i] >= ys[i - 1] and ys[i] > ys[i + 1]]
    assert len(apexes) >= 4
    expected = cfg.restitution ** 2
    ratios = [apexes[0] / 2.0] + [apexes[i + 1] / apexes[i] for i in range(3)]
    for ratio in ratios:
        assert abs(ratio - expected) / expected <= 0.05


def test_bounce_alternates_floor_contact():
    cfg = SceneConfig(seed=0)
    w = world(FLOOR, ball_at((0.0, 0.6, 0.0)), cfg=cfg)
    rels = []
    for _ in range(60):
        w = tick(w, "bounce", "ball", (1, 0, 0), cfg)
        rels.append(w.body("ball").contacts["floor"])
    assert Rel.EC in rels and Rel.DC in rels
    assert Rel.PO not in rels


def test_fly_keeps_altitude_and_stays_dc():
    cfg = SceneConfig(seed=0)
    w = world(FLOOR, ball_at((0.0, 1.5, 0.0)), cfg=cfg)
    for _ in range(100):
        w = tick(w, "fly", "ball", (1, 0, 0), cfg)
        assert w.body("ball").position[1] == 1.5
        assert w.body("ball").contacts["floor"] is Rel.DC


def test_goal_clamp_stops_at_contact_without_tunneling():
    cfg = SceneConfig(seed=0, speed=10.0)  # 0.166 m per tick: will cross the face
    w = world(FLOOR, ball_at((4.3, 0.5, 0.0)), WALL, cfg=cfg)
    for _ in range(10):
        w = tick(w, "slide", "ball", (1, 0, 0), cfg)
        d = surface_distance(w.body("ball"), w.body("wall"))
        assert d > -cfg.contact_eps  # never PO against the goal
    assert w.body("ball").contacts["wall"] is Rel.EC


def test_position_fixed_point_after_goal_contact():
    cfg = SceneConfig(seed=0)
    w = world(FLOOR, ball_at((4.4, 0.5, 0.0)), WALL, cfg=cfg)  # exactly touching
    positions = []
    for _ in range(5):
        w = tick(w, "roll", "ball", (1, 0, 0), cfg)
        positions.append(w.body("ball").position)
    for p in positions:
        assert vnorm(vsub(p, positions[0])) <= 1e-9
    # rolling in place accumulates no rotation: arc length is zero
    assert w.body("ball").rotation <= 1e-9


def test_resolve_goal_contact_clamps_crossing_step():
    w = world(FLOOR, ball_at((4.35, 0.5, 0.0)), WALL)
    out = resolve_goal_contact(w, "ball", "wall", (4.45, 0.5, 0.0))
    assert surface_distance(out.body("ball"), out.body("wall")) == pytest.approx(0.0, abs=1e-9)
    assert out.body("ball").velocity[0] == 0.0


def test_resolve_goal_contact_ignores_noncrossing_step():
    w = world(FLOOR, ball_at((3.4, 0.5, 0.0)), WALL)
    out = resolve_goal_contact(w, "ball", "wall", (3.5, 0.5, 0.0))
    assert out.body("ball").position == (3.5, 0.5, 0.0)


def test_roll_arc_length_coupling_over_1000_frames():
    cfg = SceneConfig(seed=0)
    w = world(FLOOR, ball_at((0, 0.5, 0)), cfg=cfg)
    path = 0.0
    prev = w.body("ball").position
    for _ in range(1000):
        w = tick(w, "roll", "ball", (1, 0, 0), cfg)
        cur = w.body("ball").position
        path += hnorm(vsub(cur, prev))
        prev = cur
    assert abs(w.body("ball").rotation - path / 0.5) <= 1e-6


def test_roll_slide_move_preserve_floor_contact():
    cfg = SceneConfig(seed=0)
    for action in ("roll", "slide", "move"):
        w = world(FLOOR, ball_at((0, 0.5, 0)), cfg=cfg)
        for _ in range(200):
            w = tick(w, action, "ball", (0, 0, 1), cfg)
            assert w.body("ball").contacts["floor"] is Rel.EC


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=120),
    angle=st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False),
)
def test_slide_reversibility(n, angle):
    cfg = SceneConfig(seed=0)
    direction = (math.cos(angle), 0.0, math.sin(angle))
    back = (-direction[0], 0.0, -direction[2])
    w = world(FLOOR, ball_at((0, 0.5, 0)), cfg=cfg)
    start = w.body("ball").position
    for _ in range(n):
        w = tick(w, "slide", "ball", direction, cfg)
    for _ in range(n):
        w = tick(w, "slide", "ball", back, cfg)
    assert vnorm(vsub(w.body("ball").position, start)) <= 1e-9
