"""Bundled demo systems and reference signals.

Two desk-scale scenarios ship with the package: a trio of third-order SISO
systems given a damped-sine tracking task (horizon 35), and a pair of
two-wheel mobile robots told to follow a circular path specified through
velocity/azimuth references (horizon 80 at a 0.05 s sample time).
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .models import LtvModel

EXAMPLE1_T = 35
EXAMPLE2_T = 80
EXAMPLE2_SAMPLE_TIME = 0.05
EXAMPLE2_SPEED = 3.0
EXAMPLE2_HOLD_STEPS = 10
# As printed in the scenario source; exposed as a config parameter because the
# value drives several full turns over the 4 s horizon.
EXAMPLE2_AZIMUTH_SLOPE = -0.6875

_EXAMPLE1_LAST_ROWS = {
    "host": (-0.09, -0.60, -1.40),
    "guest": (-0.08, -0.66, -1.50),
    "dissimilar": (-0.20, -0.20, -1.30),
}
_EXAMPLE1_X0 = {
    "host": (0.0, 0.0, 1.02),
    "guest": (0.0, 0.0, 1.0),
    "dissimilar": (0.2, 0.0, 1.0),
}


def example1_system(role: str, T: int = EXAMPLE1_T) -> LtvModel:
    """Third-order SISO system with a time-varying companion-like A(t)."""
    r1, r2, r3 = _EXAMPLE1_LAST_ROWS[role]
    A = np.zeros((T, 3, 3))
    for t in range(T):
        a = 0.05 * t
        A[t] = [[a, 1.0, 0.0], [0.0, a, 1.0], [r1, r2, r3 + a]]
    B = np.tile(np.array([[6.0], [0.0], [0.5]]), (T, 1, 1))
    C = np.tile(np.array([[2.0, 1.0, 0.0]]), (T, 1, 1))
    D = np.zeros((T, 1, 1))
    return LtvModel(A=A, B=B, C=C, D=D, x0=np.array(_EXAMPLE1_X0[role]))


_EXAMPLE2_PARAMS = {
    "host": (
        [[1.0100, 0.0, 0.0], [0.0, 1.0, 0.0520], [0.0, 0.0, 1.0100]],
        [[0.0130, 0.0130], [-0.0025, -0.0050], [-0.0850, -0.1700]],
        (3.0, 0.0, 0.0),
    ),
    "guest": (
        [[0.9975, 0.0, 0.0], [0.0, 1.0, 0.0499], [0.0, 0.0, 0.9955]],
        [[0.0125, 0.0125], [-0.0021, -0.0042], [-0.0833, -0.1666]],
        (3.02, 0.0, 1.0),
    ),
}


def example2_robot(role: str, T: int = EXAMPLE2_T) -> LtvModel:
    """Two-wheel mobile robot, state (v, azimuth, azimuth rate), inputs
    (right, left) drive, outputs (v, azimuth)."""
    A, B, x0 = _EXAMPLE2_PARAMS[role]
    C = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    D = np.zeros((2, 2))
    return LtvModel.constant(A, B, C, D, x0, T)


_BUILTIN_FACTORIES = {
    "example1-host": lambda T: example1_system("host", T),
    "example1-guest": lambda T: example1_system("guest", T),
    "example1-dissimilar": lambda T: example1_system("dissimilar", T),
    "example2-host": lambda T: example2_robot("host", T),
    "example2-guest": lambda T: example2_robot("guest", T),
}

BUILTIN_MODEL_NAMES = tuple(sorted(_BUILTIN_FACTORIES))


def builtin_model(name: str, T: int) -> LtvModel:
    """Look up a bundled system by name."""
    try:
        factory = _BUILTIN_FACTORIES[name]
    except KeyError:
        raise ConfigError(
            f"unknown built-in model {name!r}; available: {', '.join(BUILTIN_MODEL_NAMES)}"
        ) from None
    return factory(T)


def damped_sine_reference(T: int, decay: float = 0.1, period: float = 10.0) -> np.ndarray:
    """Scalar reference exp(-decay*t) * sin(2*pi*t/period), t = 0..T-1."""
    t = np.arange(T)
    return np.exp(-decay * t) * np.sin(2.0 * np.pi * t / period)


def robot_circle_reference(
    T: int,
    speed: float = EXAMPLE2_SPEED,
    hold_steps: int = EXAMPLE2_HOLD_STEPS,
    slope: float = EXAMPLE2_AZIMUTH_SLOPE,
) -> np.ndarray:
    """Velocity/azimuth reference pair for the circular path: constant speed,
    azimuth flat for the first ``hold_steps + 1`` samples and then a ramp of
    ``slope`` per step."""
    n = np.arange(T)
    azimuth = np.where(n <= hold_steps, 0.0, slope * (n - hold_steps - 1))
    return np.column_stack([np.full(T, float(speed)), azimuth]).ravel()


def integrate_planar_path(y: np.ndarray, sample_time: float = EXAMPLE2_SAMPLE_TIME) -> np.ndarray:
    """Positions swept by a (velocity, azimuth) output supervector, starting
    at the origin: one explicit-Euler step of the planar kinematics per
    sample.  Returns (T+1, 2) points."""
    vy = np.asarray(y, dtype=float).reshape(-1, 2)
    points = np.zeros((vy.shape[0] + 1, 2))
    for k, (v, phi) in enumerate(vy):
        step = sample_time * v * np.array([np.cos(phi), np.sin(phi)])
        points[k + 1] = points[k] + step
    return points
