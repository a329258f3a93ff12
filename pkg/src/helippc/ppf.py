"""Performance envelope functions.

Two envelope families bound the tracking error from above and below:

* a finite-time funnel that starts at ``e0 +/- delta`` (so the initial error
  never has to be known ahead of time), shrinks smoothly, and equals the
  terminal band ``+/- lambda_inf`` exactly from the preset settling time
  ``t_f`` onward;
* the classic symmetric exponential envelope ``rho(t) = (rho0 - rho_inf) *
  exp(-k t) + rho_inf`` used as the comparison baseline.

Both are evaluated together with analytic first and second time derivatives,
because the controller consumes the derivatives at every integration step.
Finite differences are used only as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Below this remaining fraction of t_f the funnel is held at its terminal
# value: the decay factor there is < exp(-700), far past double precision.
_TERMINAL_FRACTION = 1e-12
_EXPONENT_FLOOR = -700.0


@dataclass(frozen=True)
class NovelPpfParams:
    """Finite-time funnel parameters.

    e0 is the tracking error measured at simulation start; the funnel is
    centered on it, which is what removes the need for prior knowledge of
    the initial error.
    """

    e0: float            # initial tracking error [rad]
    delta: float         # initial half-width offset [rad]
    lambda_inf: float    # steady-state bound [rad]
    t_f: float           # preset settling time [s]

    def __post_init__(self) -> None:
        if not math.isfinite(self.e0):
            raise ValueError("e0 must be finite")
        if not (self.delta > self.lambda_inf > 0.0):
            raise ValueError("require delta > lambda_inf > 0")
        if not (self.t_f > 0.0 and math.isfinite(self.t_f)):
            raise ValueError("require t_f > 0")


@dataclass(frozen=True)
class ExpPpfParams:
    """Exponential (baseline) envelope parameters."""

    rho0: float          # initial bound [rad]
    rho_inf: float       # steady bound [rad]
    k: float             # decay rate [1/s]

    def __post_init__(self) -> None:
        if not (self.rho0 > self.rho_inf > 0.0):
            raise ValueError("require rho0 > rho_inf > 0")
        if not (self.k > 0.0 and math.isfinite(self.k)):
            raise ValueError("require k > 0")


@dataclass(frozen=True)
class EnvelopeSample:
    """Upper/lower bounds and their first two time derivatives at one instant."""

    pu: float            # upper bound [rad]
    pl: float            # lower bound [rad]
    pu_dot: float        # [rad/s]
    pl_dot: float
    pu_ddot: float       # [rad/s^2]
    pl_ddot: float

    @property
    def width(self) -> float:
        return self.pu - self.pl


def _decay(t_f: float, t: float) -> tuple[float, float, float]:
    """Common funnel decay factor r(t) = ((t_f - t)/t_f) * exp(1 - t_f/(t_f - t))
    and its first two time derivatives, for t in [0, t_f).

    r(0) = 1 and r, r', r'' all vanish as t -> t_f, which is what makes the
    envelope continuously differentiable across the settling instant.
    """
    u = t_f - t
    ex = 1.0 - t_f / u
    if ex < _EXPONENT_FLOOR:
        ex = _EXPONENT_FLOOR
    w = math.exp(ex)
    r = (u / t_f) * w
    rd = -w * (1.0 / t_f + 1.0 / u)
    rdd = w * t_f / (u * u * u)
    return r, rd, rdd


def eval_novel(params: NovelPpfParams, t: float) -> EnvelopeSample:
    """Evaluate the finite-time funnel at time t >= 0.

    For t >= t_f (or within 1e-12 * t_f of it) returns the terminal band
    (lambda_inf, -lambda_inf) with zero derivatives.
    """
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    if t < 0.0:
        raise ValueError("t must be >= 0")
    lam = params.lambda_inf
    if t >= params.t_f or (params.t_f - t) < _TERMINAL_FRACTION * params.t_f:
        return EnvelopeSample(lam, -lam, 0.0, 0.0, 0.0, 0.0)
    r, rd, rdd = _decay(params.t_f, t)
    au = params.e0 + params.delta - lam
    al = params.e0 - params.delta + lam
    return EnvelopeSample(
        pu=au * r + lam,
        pl=al * r - lam,
        pu_dot=au * rd,
        pl_dot=al * rd,
        pu_ddot=au * rdd,
        pl_ddot=al * rdd,
    )


def eval_exp(params: ExpPpfParams, t: float) -> EnvelopeSample:
    """Evaluate the symmetric exponential baseline envelope at time t >= 0."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    if t < 0.0:
        raise ValueError("t must be >= 0")
    core = (params.rho0 - params.rho_inf) * math.exp(-params.k * t)
    rho = core + params.rho_inf
    rho_dot = -params.k * core
    rho_ddot = params.k * params.k * core
    return EnvelopeSample(rho, -rho, rho_dot, -rho_dot, rho_ddot, -rho_ddot)
