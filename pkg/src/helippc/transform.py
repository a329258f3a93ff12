"""Error transformations between envelope-constrained and free coordinates.

The constrained tracking error e, which must stay strictly between the lower
and upper bounds (pl, pu), is mapped onto an unconstrained variable z through

    e = (pu - pl) * phi(z) + pl,        phi(z) = arctan(z)/pi + 1/2

so any bounded z corresponds to an error strictly inside the envelope.  The
baseline scheme uses the hyperbolic-tangent map theta(z) = tanh(z) the same
way; for the symmetric envelopes it is paired with, this reduces to the
familiar e = rho(t) * tanh(z).

Differentiating z1(t) = phi_inv(xi(t)) with xi = (e - pl)/(pu - pl) twice
gives the dynamics of the transformed error.  The full derivation, term by
term, is in docs/transform_calculus.md; the key outputs are

    z2   = dz1/dt = gain(z1) * xi_dot
    dz2/dt = N + m3 * e_ddot

where m3 = gain(z1)/(pu - pl) multiplies the error acceleration (and hence
the control input) and N collects every remaining chain-rule term.  Only the
combined drift N is exposed; it is what the control law cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ppf import EnvelopeSample

# Normalized-coordinate clamp used for diagnostics only (never during a
# closed-loop run, where leaving the envelope must surface as a violation).
XI_CLAMP = 1e-9


class EnvelopeViolation(Exception):
    """Tracking error left the open interval (pl, pu)."""

    def __init__(self, t: float, e: float, pu: float, pl: float):
        self.t = t
        self.e = e
        self.pu = pu
        self.pl = pl
        super().__init__(
            f"error e={e:.9g} outside envelope ({pl:.9g}, {pu:.9g}) at t={t:.9g}"
        )


class DegenerateEnvelope(Exception):
    """Envelope width pu - pl is not strictly positive."""


@dataclass(frozen=True)
class TransformState:
    """Transformed error pair plus the quantities the controller needs."""

    z1: float    # transformed error (dimensionless)
    z2: float    # transformed error rate [1/s]
    xi: float    # normalized position in the envelope, in (0, 1)
    m3: float    # input gain [1/rad], strictly positive


# --- arctan family ---------------------------------------------------------

def phi(z: float) -> float:
    """Map the free variable onto (0, 1): arctan(z)/pi + 1/2."""
    return math.atan(z) / math.pi + 0.5


def phi_inv(xi: float) -> float:
    """Inverse of phi: tan(pi * (xi - 1/2)).  Requires 0 < xi < 1 strictly."""
    if not 0.0 < xi < 1.0:
        raise ValueError(f"xi={xi!r} outside (0, 1); envelope violated upstream")
    return math.tan(math.pi * (xi - 0.5))


def _gain_arctan(z1: float) -> float:
    # d(phi_inv)/d(xi) evaluated at xi(z1)
    return math.pi * (1.0 + z1 * z1)


def _dgain_dz_arctan(z1: float) -> float:
    return 2.0 * math.pi * z1


# --- tanh (baseline) family ------------------------------------------------

def theta(z: float) -> float:
    """Hyperbolic-tangent map onto (-1, 1)."""
    return math.tanh(z)


def theta_inv(u: float) -> float:
    """Inverse of theta.  Requires -1 < u < 1 strictly."""
    if not -1.0 < u < 1.0:
        raise ValueError(f"theta_inv argument {u!r} outside (-1, 1)")
    return math.atanh(u)


def _gain_tanh(z1: float) -> float:
    # phi_inv here is atanh(2 xi - 1); derivative wrt xi is 2 cosh^2(z1)
    c = math.cosh(z1)
    return 2.0 * c * c


def _dgain_dz_tanh(z1: float) -> float:
    return 2.0 * math.sinh(2.0 * z1)


# --- shared machinery ------------------------------------------------------

def _xi(e: float, env: EnvelopeSample, t: float, clamp: bool) -> float:
    w = env.width
    if w <= 0.0:
        raise DegenerateEnvelope(f"envelope width {w!r} not positive")
    xi = (e - env.pl) / w
    if clamp:
        return min(max(xi, XI_CLAMP), 1.0 - XI_CLAMP)
    if not (env.pl < e < env.pu):
        raise EnvelopeViolation(t, e, env.pu, env.pl)
    return xi


def forward(e: float, env: EnvelopeSample, *, t: float = 0.0, clamp: bool = False) -> float:
    """Transformed error z1 for a measured error strictly inside the envelope.

    With clamp=True the normalized coordinate is clamped to
    [XI_CLAMP, 1 - XI_CLAMP] instead of raising; use only for diagnostics.
    """
    return phi_inv(_xi(e, env, t, clamp))


def reconstruct(z: float, env: EnvelopeSample) -> float:
    """Error corresponding to a free value z: always strictly inside (pl, pu)."""
    return env.width * phi(z) + env.pl


def m3(z1: float, env: EnvelopeSample) -> float:
    """Input gain multiplying the error acceleration: pi (1 + z1^2)/(pu - pl)."""
    w = env.width
    if w <= 0.0:
        raise DegenerateEnvelope(f"envelope width {w!r} not positive")
    return _gain_arctan(z1) / w


def theta_forward(e: float, env: EnvelopeSample, *, t: float = 0.0, clamp: bool = False) -> float:
    """Transformed error under the tanh map (baseline scheme)."""
    xi = _xi(e, env, t, clamp)
    u = 2.0 * xi - 1.0
    return math.atanh(u)


def theta_reconstruct(z: float, env: EnvelopeSample) -> float:
    """Inverse of theta_forward; for a symmetric envelope this is rho * tanh(z)."""
    return env.width * (math.tanh(z) + 1.0) * 0.5 + env.pl


def theta_m3(z1: float, env: EnvelopeSample) -> float:
    """Input gain of the tanh family: 2 cosh^2(z1)/(pu - pl)."""
    w = env.width
    if w <= 0.0:
        raise DegenerateEnvelope(f"envelope width {w!r} not positive")
    return _gain_tanh(z1) / w


def _drift(
    e: float,
    e_dot: float,
    env: EnvelopeSample,
    t: float,
    gain,
    dgain_dz,
) -> tuple[float, float, float, float]:
    """Chain-rule core shared by both families.

    Returns (z1, z2, m3, N) with N every term of dz2/dt except m3 * e_ddot.
    """
    xi = _xi(e, env, t, clamp=False)
    if gain is _gain_arctan:
        z1 = math.tan(math.pi * (xi - 0.5))
    else:
        z1 = math.atanh(2.0 * xi - 1.0)
    w = env.width
    wd = env.pu_dot - env.pl_dot
    wdd = env.pu_ddot - env.pl_ddot
    g = gain(z1)
    xi_dot = ((e_dot - env.pl_dot) - xi * wd) / w
    z2 = g * xi_dot
    n = dgain_dz(z1) * g * xi_dot * xi_dot \
        + g * (-env.pl_ddot - 2.0 * xi_dot * wd - xi * wdd) / w
    return z1, z2, g / w, n


def drift(e: float, e_dot: float, env: EnvelopeSample, *, t: float = 0.0) -> float:
    """Drift N of the transformed dynamics (arctan family): dz2/dt = N + m3 * e_ddot."""
    return _drift(e, e_dot, env, t, _gain_arctan, _dgain_dz_arctan)[3]


def theta_drift(e: float, e_dot: float, env: EnvelopeSample, *, t: float = 0.0) -> float:
    """Drift N of the transformed dynamics for the tanh family."""
    return _drift(e, e_dot, env, t, _gain_tanh, _dgain_dz_tanh)[3]


def transform_state(
    e: float,
    e_dot: float,
    env: EnvelopeSample,
    family: str = "arctan",
    *,
    t: float = 0.0,
) -> TransformState:
    """Full transformed state (z1, z2, xi, m3) for one family at one instant."""
    if family == "arctan":
        z1, z2, m3v, _ = _drift(e, e_dot, env, t, _gain_arctan, _dgain_dz_arctan)
    elif family == "tanh":
        z1, z2, m3v, _ = _drift(e, e_dot, env, t, _gain_tanh, _dgain_dz_tanh)
    else:
        raise ValueError(f"unknown transform family {family!r}")
    return TransformState(z1=z1, z2=z2, xi=_xi(e, env, t, clamp=False), m3=m3v)
