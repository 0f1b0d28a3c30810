"""Fixed-timestep rigid-body updates and the contact predicates over them.

Pure kinematics: horizontal motion at constant speed, gravity only for
the bounce action.  Every tick is a pure function from world state to
world state; determinism and checkability win over physical fidelity.
Shapes are spheres, axis-aligned boxes and the horizontal floor plane,
which keeps surface distances exact and the contact relations decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping

from .config import SceneConfig
from .errors import ImmobileThemeError, UnboundObjectError, UnsupportedShapePair
from .lexicon import Shape

Vec3 = tuple[float, float, float]

ZERO3: Vec3 = (0.0, 0.0, 0.0)
PLUS_X: Vec3 = (1.0, 0.0, 0.0)


def vadd(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(v: Vec3, s: float) -> Vec3:
    return (v[0] * s, v[1] * s, v[2] * s)


def vnorm(v: Vec3) -> float:
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


def hnorm(v: Vec3) -> float:
    """Length of the horizontal (xz) component."""
    return math.hypot(v[0], v[2])


class Rel(Enum):
    """Qualitative contact relation between two body surfaces."""

    EC = "EC"   # externally connected: |surface distance| <= eps
    DC = "DC"   # disconnected: surface distance > eps
    PO = "PO"   # penetrating overlap: surface distance < -eps (a fault)


@dataclass(frozen=True)
class Body:
    id: str
    shape: Shape
    dimensions: tuple[float, ...]
    mobile: bool
    position: Vec3
    heading: Vec3 = PLUS_X
    rotation: float = 0.0        # accumulated angle about the rolling axis, rad
    velocity: Vec3 = ZERO3      # y component doubles as the ballistic state
    contacts: Mapping[str, Rel] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.contacts is None:
            object.__setattr__(self, "contacts", {})

    @property
    def radius(self) -> float:
        return self.dimensions[0]

    @property
    def half_extents(self) -> Vec3:
        # box dimensions are width x height x depth; goal-facing axis is depth
        w, h, d = self.dimensions
        return (d / 2.0, h / 2.0, w / 2.0)

    @property
    def rest_height(self) -> float:
        """Center height when resting on the floor."""
        if self.shape is Shape.SPHERE:
            return self.radius
        if self.shape is Shape.BOX:
            return self.dimensions[1] / 2.0
        return 0.0

    @property
    def rolling_radius(self) -> float:
        # boxes get an effective radius so roll stays total; spheres are exact
        if self.shape is Shape.SPHERE:
            return self.radius
        if self.shape is Shape.BOX:
            return self.dimensions[1] / 2.0
        raise UnsupportedShapePair(self.shape.value, "rolling")


@dataclass(frozen=True)
class WorldState:
    time: float
    tick_index: int
    bodies: dict[str, Body]
    cfg: SceneConfig

    def body(self, object_id: str) -> Body:
        try:
            return self.bodies[object_id]
        except KeyError:
            raise UnboundObjectError(object_id) from None

    def with_body(self, body: Body) -> "WorldState":
        bodies = dict(self.bodies)
        bodies[body.id] = body
        return replace(self, bodies=bodies)


def surface_distance(a: Body, b: Body) -> float:
    """Signed gap between two body surfaces; negative means penetration."""
    pair = (a.shape, b.shape)
    if pair == (Shape.SPHERE, Shape.PLANE):
        return a.position[1] - a.radius
    if pair == (Shape.PLANE, Shape.SPHERE):
        return surface_distance(b, a)
    if pair == (Shape.BOX, Shape.PLANE):
        return a.position[1] - a.half_extents[1]
    if pair == (Shape.PLANE, Shape.BOX):
        return surface_distance(b, a)
    if pair == (Shape.SPHERE, Shape.BOX):
        return _point_box_distance(a.position, b) - a.radius
    if pair == (Shape.BOX, Shape.SPHERE):
        return surface_distance(b, a)
    if pair == (Shape.SPHERE, Shape.SPHERE):
        return vnorm(vsub(a.position, b.position)) - a.radius - b.radius
    if pair == (Shape.BOX, Shape.BOX):
        return _box_box_distance(a, b)
    raise UnsupportedShapePair(a.shape.value, b.shape.value)


def _point_box_distance(p: Vec3, box: Body) -> float:
    """Distance from a point to an axis-aligned box (negative inside)."""
    h = box.half_extents
    d = [abs(p[i] - box.position[i]) - h[i] for i in range(3)]
    outside = math.sqrt(sum(max(di, 0.0) ** 2 for di in d))
    inside = min(max(d), 0.0)
    return outside + inside


def _box_box_distance(a: Body, b: Body) -> float:
    ha, hb = a.half_extents, b.half_extents
    gaps = [abs(a.position[i] - b.position[i]) - ha[i] - hb[i] for i in range(3)]
    if all(g <= 0 for g in gaps):
        return max(gaps)
    return math.sqrt(sum(max(g, 0.0) ** 2 for g in gaps))


def contact_relation(a: Body, b: Body, contact_eps: float) -> Rel:
    d = surface_distance(a, b)
    if d > contact_eps:
        return Rel.DC
    if d < -contact_eps:
        return Rel.PO
    return Rel.EC


def refresh_contacts(state: WorldState) -> WorldState:
    """Recompute every computable pairwise contact flag from positions."""
    eps = state.cfg.contact_eps
    ids = list(state.bodies)
    flags: dict[str, dict[str, Rel]] = {i: {} for i in ids}
    for i, a_id in enumerate(ids):
        for b_id in ids[i + 1:]:
            try:
                rel = contact_relation(state.bodies[a_id], state.bodies[b_id], eps)
            except UnsupportedShapePair:
                continue
            flags[a_id][b_id] = rel
            flags[b_id][a_id] = rel
    bodies = {i: replace(state.bodies[i], contacts=flags[i]) for i in ids}
    return replace(state, bodies=bodies)


def _unit_horizontal(direction: Vec3) -> Vec3:
    if abs(direction[1]) > 1e-9:
        raise ValueError("motion direction must be horizontal")
    n = hnorm(direction)
    if n == 0.0:
        raise ValueError("motion direction must be nonzero")
    return (direction[0] / n, 0.0, direction[2] / n)


def _clamp_fraction(theme: Body, start: Vec3, proposed: Vec3, obstacle: Body) -> float:
    """Largest fraction of the move keeping the theme outside the obstacle.

    Bisects along the segment; the crossing is unique within one step at
    desk scale, so this converges to the contact point.
    """
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2.0
        probe = replace(theme, position=vadd(start, vscale(vsub(proposed, start), mid)))
        if surface_distance(probe, obstacle) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def resolve_goal_contact(
    world: WorldState, theme_id: str, goal_id: str, proposed_position: Vec3
) -> WorldState:
    """Commit a pending translation, stopping at the goal surface if crossed.

    If the move would penetrate the goal the theme is placed at the
    contact point and its horizontal velocity is zeroed; otherwise the
    proposed position is committed unchanged.
    """
    theme = world.body(theme_id)
    goal = world.body(goal_id)
    probe = replace(theme, position=proposed_position)
    if surface_distance(probe, goal) >= 0.0:
        return world.with_body(probe)
    frac = _clamp_fraction(theme, theme.position, proposed_position, goal)
    contact = vadd(theme.position, vscale(vsub(proposed_position, theme.position), frac))
    stopped = replace(
        theme,
        position=contact,
        velocity=(0.0, theme.velocity[1], 0.0),
    )
    return world.with_body(stopped)


def _apply_obstacles(world: WorldState, theme: Body, proposed: Vec3, eps: float) -> Vec3:
    """Clamp a proposed position against every solid body other than the floor."""
    pos = proposed
    for other in world.bodies.values():
        if other.id == theme.id or other.shape is Shape.PLANE:
            continue
        try:
            d_old = surface_distance(theme, other)
            probe = replace(theme, position=pos)
            d_new = surface_distance(probe, other)
        except UnsupportedShapePair:
            continue
        if d_old <= eps and d_new < d_old:
            # already in contact and not separating: no further motion
            pos = (theme.position[0], pos[1], theme.position[2])
            continue
        if d_new < 0.0:
            frac = _clamp_fraction(theme, theme.position, pos, other)
            pos = vadd(theme.position, vscale(vsub(pos, theme.position), frac))
    return pos


def tick(
    world: WorldState,
    action: str,
    theme_id: str,
    direction: Vec3,
    cfg: SceneConfig | None = None,
) -> WorldState:
    """Advance the world by one timestep of the named atomic action.

    roll and slide translate horizontally with the center held at rest
    height; roll additionally accumulates rotation by arc length.  move
    is the generic translation.  fly translates at the current altitude.
    bounce adds semi-implicit vertical ballistics with a restitution
    bounce on floor crossing.  Any action stops at the surface of a goal
    body instead of entering it.
    """
    cfg = cfg or world.cfg
    theme = world.body(theme_id)
    if not theme.mobile:
        raise ImmobileThemeError(theme_id)
    direction = _unit_horizontal(direction)
    if action not in ("roll", "slide", "move", "fly", "bounce"):
        raise ValueError(f"unknown tick action {action!r}")

    dt = cfg.dt
    step = cfg.speed * dt
    x = theme.position[0] + direction[0] * step
    z = theme.position[2] + direction[2] * step
    vy = theme.velocity[1]

    if action in ("roll", "slide", "move"):
        y = theme.rest_height  # contact clamp prevents drift
        vy = 0.0
    elif action == "fly":
        y = theme.position[1]
        vy = 0.0
    else:  # bounce
        # exact constant-gravity flight, sampled at dt; a floor crossing
        # parks the body at contact for the rest of the step and stores
        # the restitution-scaled rebound speed (apex decay stays e^2-exact)
        y0 = theme.position[1]
        g = cfg.gravity
        y = y0 + vy * dt - 0.5 * g * dt * dt
        if y < theme.rest_height:
            impact_speed = math.sqrt(max(vy * vy + 2.0 * g * (y0 - theme.rest_height), 0.0))
            y = theme.rest_height
            vy = cfg.restitution * impact_speed
        else:
            vy = vy - g * dt

    proposed = (x, y, z)
    final = _apply_obstacles(world, theme, proposed, cfg.contact_eps)

    moved_h = math.hypot(final[0] - theme.position[0], final[2] - theme.position[2])
    rotation = theme.rotation
    if action == "roll":
        rotation += moved_h / theme.rolling_radius

    velocity = vscale(vsub(final, theme.position), 1.0 / dt)
    if action == "bounce":
        # report the ballistic state, not the positional difference, so the
        # restitution flip survives the floor clamp
        velocity = (velocity[0], vy, velocity[2])

    new_theme = replace(
        theme,
        position=final,
        rotation=rotation,
        velocity=velocity,
        heading=direction,
    )
    tick_index = world.tick_index + 1
    advanced = replace(
        world.with_body(new_theme),
        time=tick_index * cfg.dt,
        tick_index=tick_index,
    )
    return refresh_contacts(advanced)
