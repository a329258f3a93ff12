"""Tracking-error plant model for one attitude channel.

The unified error model for either constrained axis (elevation or pitch) is

    de1/dt = e2
    de2/dt = g * v + f(e1, e2) + d(t)

with a configurable input gain g, a configurable drift
f = c0 + c1*e1 + c2*e2 + c3*sin(e1), and a sinusoidal lumped disturbance.
The control law cancels f and g exactly, so the containment and settling
claims do not depend on their values; nonzero settings exercise that
cancellation path.  Defaults g = 1, f = 0 give a disturbed double integrator.

All internal state is in radians; degree values appear only at the config
boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class ChannelParams:
    """Input gain and drift coefficients of one channel."""

    g: float = 1.0
    f_coeffs: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)  # c0..c3
    channel: str = "elevation"

    def __post_init__(self) -> None:
        if self.g == 0.0:
            raise ValueError("require g != 0")
        if len(self.f_coeffs) != 4:
            raise ValueError("f_coeffs must have 4 entries (c0, c1, c2, c3)")
        if self.channel not in ("elevation", "pitch"):
            raise ValueError(f"unknown channel {self.channel!r}")

    def f(self, e1: float, e2: float) -> float:
        """Drift acceleration f(e1, e2) = c0 + c1 e1 + c2 e2 + c3 sin(e1)."""
        c0, c1, c2, c3 = self.f_coeffs
        return c0 + c1 * e1 + c2 * e2 + c3 * math.sin(e1)


@dataclass(frozen=True)
class DisturbanceSpec:
    """Sinusoidal lumped disturbance d(t) = amplitude * sin(frequency*t + phase)."""

    amplitude: float = 0.0    # [rad/s^2]
    frequency: float = 1.0    # [rad/s]
    phase: float = 0.0        # [rad]

    def __post_init__(self) -> None:
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(self.frequency * t + self.phase)


@dataclass(frozen=True)
class TrajectorySpec:
    """Sinusoidal reference x_d(t) = amplitude * sin(frequency*t + phase) + offset."""

    amplitude: float = 0.2
    frequency: float = 0.08
    phase: float = -math.pi / 2
    offset: float = 0.0

    def eval(self, t: float) -> tuple[float, float, float]:
        """Reference angle and its first two derivatives at time t."""
        arg = self.frequency * t + self.phase
        x = self.amplitude * math.sin(arg) + self.offset
        xd = self.amplitude * self.frequency * math.cos(arg)
        xdd = -self.amplitude * self.frequency * self.frequency * math.sin(arg)
        return x, xd, xdd


#: Elevation reference used by the built-in scenarios: 0.2 sin(0.08 t - pi/2).
CASE_TRAJECTORY = TrajectorySpec()


def desired_trajectory(t: float) -> tuple[float, float, float]:
    """Built-in elevation reference (x_d, dx_d/dt, d2x_d/dt2) at time t >= 0."""
    if t < 0.0:
        raise ValueError("t must be >= 0")
    return CASE_TRAJECTORY.eval(t)


def error_dynamics(
    e1: float,
    e2: float,
    v: float,
    t: float,
    params: ChannelParams,
    dist: DisturbanceSpec,
) -> tuple[float, float]:
    """Right-hand side (de1/dt, de2/dt) of the error model."""
    return e2, params.g * v + params.f(e1, e2) + dist(t)


class DomainViolation(NamedTuple):
    axis: str       # "alpha" or "beta"
    value: float    # offending angle [rad]
    bound: float    # violated bound [rad]


@dataclass(frozen=True)
class OperatingDomain:
    """Mechanical operating limits of the helicopter attitude angles."""

    alpha_min: float = math.radians(-27.5)
    alpha_max: float = math.radians(30.0)
    beta_min: float = math.radians(-45.0)
    beta_max: float = math.radians(45.0)

    def __post_init__(self) -> None:
        if not (self.alpha_min < self.alpha_max and self.beta_min < self.beta_max):
            raise ValueError("require min < max per axis")


def check_domain(
    alpha: float, beta: float, domain: OperatingDomain = OperatingDomain()
) -> DomainViolation | None:
    """None when both angles are inside their bounds (inclusive); otherwise the
    first violated axis.  A violation is a reported value, never a fault."""
    if alpha < domain.alpha_min:
        return DomainViolation("alpha", alpha, domain.alpha_min)
    if alpha > domain.alpha_max:
        return DomainViolation("alpha", alpha, domain.alpha_max)
    if beta < domain.beta_min:
        return DomainViolation("beta", beta, domain.beta_min)
    if beta > domain.beta_max:
        return DomainViolation("beta", beta, domain.beta_max)
    return None
