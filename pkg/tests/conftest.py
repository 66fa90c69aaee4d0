"""Shared helpers: seeded random states and frames, rotations, hypothesis profile."""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spinsqueeze import CoupledState, Frame, matrix_exponential, spin_component

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def random_coupled(rng) -> CoupledState:
    raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    return CoupledState.normalized(raw)


def random_unit(rng) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_frame(rng) -> Frame:
    n = random_unit(rng)
    t = rng.standard_normal(3)
    t -= np.dot(t, n) * n
    t /= np.linalg.norm(t)
    return Frame(n, t, np.cross(n, t))


def rotation_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    k = np.asarray(axis, dtype=float)
    kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * kx + (1.0 - math.cos(angle)) * (kx @ kx)


def rotate_coupled(state: CoupledState, axis: np.ndarray, angle: float) -> CoupledState:
    """Apply the same SU(2) rotation exp(-i angle axis.S) to both subsystems."""
    u = matrix_exponential(spin_component(axis), scale=-1j * angle, kind="hermitian")
    return CoupledState.normalized(u @ state.c @ u.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)
