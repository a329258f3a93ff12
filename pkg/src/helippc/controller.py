"""Integral sliding-mode controller in transformed coordinates.

The surface is s = z2 + integral(z_s) with the nonsingular fractional term

    z_s = gamma1 |z1|^p sgn(z1) + gamma2 |z2|^(2p/(1+p)) sgn(z2)

and the smooth finite-time law

    w1 = -l1 |s|^((m-1)/m) sgn(s) - l2 s - z_s - N - integral(l3 |s|^((m-2)/m) sgn(s) + l4 s)
    v1 = (w1 / m3 - f1) / g1

so the transformed dynamics collapse to dz2/dt = w1 + N-cancellation + m3*d.
All fractional powers use the |x|^q sgn(x) form, which keeps every output
finite for finite inputs (no negative exponents, no division by state).

Time-varying/adaptive gain schedules are out of scope here; the gains are
user-configurable constants.  The defaults were coarse-tuned so the built-in
elevation scenario satisfies its envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def powsign(x: float, q: float) -> float:
    """|x|^q * sgn(x) with sgn(0) = 0, continuous at the origin for q > 0."""
    if x > 0.0:
        return math.pow(x, q)
    if x < 0.0:
        return -math.pow(-x, q)
    return 0.0


@dataclass(frozen=True)
class SurfaceParams:
    """Sliding-surface shape parameters."""

    gamma1: float = 2.0
    gamma2: float = 3.0
    p: float = 0.6        # fractional exponent, in (0, 1)

    def __post_init__(self) -> None:
        if not self.gamma1 > 0.0:
            raise ValueError("require gamma1 > 0")
        if not self.gamma2 > 0.0:
            raise ValueError("require gamma2 > 0")
        if not 0.0 < self.p < 1.0:
            raise ValueError("require 0 < p < 1")


@dataclass(frozen=True)
class GainConfig:
    """Constant feedback gains of the finite-time law.

    m > 2 keeps both exponents (m-1)/m and (m-2)/m inside (0, 1).
    """

    l1: float = 5.0
    l2: float = 10.0
    l3: float = 2.0
    l4: float = 5.0
    m: float = 3.0

    def __post_init__(self) -> None:
        for name in ("l1", "l2", "l3", "l4"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"require {name} >= 0")
        if not self.m > 2.0:
            raise ValueError("require m > 2")


@dataclass
class ControllerState:
    """Integral states advanced alongside the plant (both zero at t = 0)."""

    int_zs: float = 0.0        # accumulated integral of z_s [1/s]
    int_robust: float = 0.0    # accumulated robust-term integral


def surface_term_zs(z1: float, z2: float, params: SurfaceParams) -> float:
    """Integrand z_s of the sliding surface; odd in (z1, z2) jointly."""
    q2 = 2.0 * params.p / (1.0 + params.p)
    return params.gamma1 * powsign(z1, params.p) + params.gamma2 * powsign(z2, q2)


def sliding_surface(z2: float, state: ControllerState) -> float:
    """Surface value s = z2 + integral(z_s)."""
    return z2 + state.int_zs


def control_w1(
    s: float,
    zs: float,
    n: float,
    gains: GainConfig,
    state: ControllerState,
    *,
    z1: float = 0.0,
    z_term: str = "zs",
) -> float:
    """Transformed-coordinate control effort.

    The bare error term subtracted alongside the drift is z_s by default;
    z_term="z1" selects the alternative reading (see the scenario switch).
    """
    if z_term == "zs":
        zv = zs
    elif z_term == "z1":
        zv = z1
    else:
        raise ValueError(f"unknown z_term {z_term!r}")
    q1 = (gains.m - 1.0) / gains.m
    return -gains.l1 * powsign(s, q1) - gains.l2 * s - zv - n - state.int_robust


def control_v1(w1: float, m3_val: float, f1: float, g1: float) -> float:
    """Plant input v1 = (w1/m3 - f1)/g1: cancels f1 and scales out m3 and g1."""
    if g1 == 0.0:
        raise ValueError("actuation error: g1 = 0")
    if not m3_val > 0.0:
        raise ValueError(f"actuation error: m3 = {m3_val!r} not positive")
    return (w1 / m3_val - f1) / g1


def robust_integrand(s: float, gains: GainConfig) -> float:
    """Integrand of the robust term, integrated as an auxiliary state."""
    q3 = (gains.m - 2.0) / gains.m
    return gains.l3 * powsign(s, q3) + gains.l4 * s
