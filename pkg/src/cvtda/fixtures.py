"""Small point clouds with known homology, used by tests, demos and ``verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PointCloud

__all__ = ["Fixture", "single_point", "two_clusters", "circle", "octahedron", "all_fixtures"]


@dataclass(frozen=True)
class Fixture:
    name: str
    cloud: PointCloud
    epsilon: float
    betti: tuple[int, int, int]


def single_point() -> Fixture:
    return Fixture("single_point", PointCloud(np.array([[1.0, 0.0]])), 0.5, (1, 0, 0))


def two_clusters() -> Fixture:
    """Three points near angle 0 and three near angle pi on the unit circle."""
    angles = [-0.1, 0.0, 0.1, math.pi - 0.1, math.pi, math.pi + 0.1]
    coords = np.array([[math.cos(a), math.sin(a)] for a in angles])
    return Fixture("two_clusters", PointCloud(coords), 0.5, (2, 0, 0))


def circle(points: int = 8, epsilon: float = 0.8) -> Fixture:
    """Regular polygon on the unit circle.

    Neighbouring points are ``2 sin(pi/8) ~ 0.765`` apart for eight points,
    so ``epsilon = 0.8`` keeps the cycle but no chords.
    """
    angles = 2 * math.pi * np.arange(points) / points
    coords = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return Fixture(f"circle{points}", PointCloud(coords), epsilon, (1, 1, 0))


def octahedron() -> Fixture:
    """``+-e_i`` in three dimensions; edges ``sqrt 2``, antipodes ``2``."""
    eye = np.eye(3)
    coords = np.concatenate([eye, -eye])
    return Fixture("octahedron", PointCloud(coords), 1.5, (1, 0, 1))


def all_fixtures() -> list[Fixture]:
    return [single_point(), two_clusters(), circle(), octahedron()]
