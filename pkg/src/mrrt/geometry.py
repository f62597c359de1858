"""Planar primitives shared by the planner and the simulator.

Obstacles are closed discs and the robot is a point; the robot's radius and
any safety margin are folded into an ``inflation`` term added to each disc.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class DegenerateInputError(ValueError):
    """Raised when an operation is asked to act on coincident points."""


class Config(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Workspace:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if not (self.max_x > self.min_x and self.max_y > self.min_y):
            raise ValueError(f"empty workspace: {self}")

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, p: Config, tol: float = 0.0) -> bool:
        return (self.min_x - tol <= p[0] <= self.max_x + tol
                and self.min_y - tol <= p[1] <= self.max_y + tol)

    def clamp(self, p: Config) -> Config:
        return Config(min(max(p[0], self.min_x), self.max_x),
                      min(max(p[1], self.min_y), self.max_y))


@dataclass(frozen=True)
class Disc:
    center: Config
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disc radius must be positive, got {self.radius}")


def dist(a: Config, b: Config) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def steer(start: Config, toward: Config, eta: float) -> Config:
    """Move from ``start`` toward ``toward`` by at most ``eta``.

    Returns ``toward`` itself when it is already within reach.
    """
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    dx = toward[0] - start[0]
    dy = toward[1] - start[1]
    d = math.hypot(dx, dy)
    if d == 0.0:
        raise DegenerateInputError(f"cannot steer from {start} toward itself")
    if d <= eta:
        return Config(toward[0], toward[1])
    s = eta / d
    return Config(start[0] + dx * s, start[1] + dy * s)


def point_in_disc(p: Config, d: Disc, inflation: float = 0.0) -> bool:
    r = d.radius + inflation
    dx = p[0] - d.center[0]
    dy = p[1] - d.center[1]
    return dx * dx + dy * dy <= r * r


def point_segment_distance(p: Config, a: Config, b: Config) -> float:
    abx = b[0] - a[0]
    aby = b[1] - a[1]
    apx = p[0] - a[0]
    apy = p[1] - a[1]
    den = abx * abx + aby * aby
    if den == 0.0:
        return math.hypot(apx, apy)
    t = (apx * abx + apy * aby) / den
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(apx - t * abx, apy - t * aby)


def segment_disc_collides(a: Config, b: Config, d: Disc, inflation: float = 0.0) -> bool:
    """True iff the closed segment ``ab`` touches the inflated closed disc."""
    r = d.radius + inflation
    cx, cy = d.center
    abx = b[0] - a[0]
    aby = b[1] - a[1]
    apx = cx - a[0]
    apy = cy - a[1]
    den = abx * abx + aby * aby
    if den == 0.0:
        t = 0.0
    else:
        t = (apx * abx + apy * aby) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    ex = apx - t * abx
    ey = apy - t * aby
    return ex * ex + ey * ey <= r * r


def segment_free(a: Config, b: Config, discs: Sequence[Disc], inflation: float = 0.0) -> bool:
    for d in discs:
        if segment_disc_collides(a, b, d, inflation):
            return False
    return True


def point_free(p: Config, discs: Sequence[Disc], inflation: float = 0.0) -> bool:
    for d in discs:
        if point_in_disc(p, d, inflation):
            return False
    return True


def segments_hit_discs(ax, ay, bx, by, discs: Sequence[Disc], inflation: float = 0.0) -> np.ndarray:
    """Vectorised :func:`segment_disc_collides` over arrays of segments.

    Returns a boolean mask, True where a segment touches any disc. Uses the
    same closed-form test and clamping as the scalar version.
    """
    ax = np.asarray(ax, dtype=float)
    ay = np.asarray(ay, dtype=float)
    abx = np.asarray(bx, dtype=float) - ax
    aby = np.asarray(by, dtype=float) - ay
    den = abx * abx + aby * aby
    safe = np.where(den == 0.0, 1.0, den)
    hit = np.zeros(ax.shape, dtype=bool)
    for d in discs:
        r = d.radius + inflation
        apx = d.center[0] - ax
        apy = d.center[1] - ay
        t = np.clip((apx * abx + apy * aby) / safe, 0.0, 1.0)
        t = np.where(den == 0.0, 0.0, t)
        ex = apx - t * abx
        ey = apy - t * aby
        hit |= ex * ex + ey * ey <= r * r
    return hit


def points_in_discs(px, py, discs: Sequence[Disc], inflation: float = 0.0) -> np.ndarray:
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    hit = np.zeros(px.shape, dtype=bool)
    for d in discs:
        r = d.radius + inflation
        dx = px - d.center[0]
        dy = py - d.center[1]
        hit |= dx * dx + dy * dy <= r * r
    return hit


def sample_uniform(w: Workspace, rng: random.Random) -> Config:
    return Config(w.min_x + w.width * rng.random(), w.min_y + w.height * rng.random())
