"""Closed-loop scenario simulation, trace logging, and metrics.

A Scenario bundles everything needed for one deterministic run: plant and
disturbance parameters, reference trajectory, envelope family and its
parameters, transform family, controller configuration, initial attitude and
integrator settings.  run() advances the coupled 4-state system
(e1, e2, int_zs, int_robust) with classical fixed-step RK4, evaluating the
time-varying envelope and the control law at every sub-stage time, and logs
one TraceRow per step.

Containment is checked at every right-hand-side evaluation; a boundary
crossing ends the run early with a violation record rather than being
clamped away.  Identical scenarios produce bit-identical traces on a given
backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple

import numpy as np

from . import _loop
from ._backends import get_run_loop, resolve_backend
from .controller import GainConfig, SurfaceParams
from .plant import (
    ChannelParams,
    DisturbanceSpec,
    OperatingDomain,
    TrajectorySpec,
    check_domain,
)
from .ppf import ExpPpfParams, NovelPpfParams

GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class NovelEnvelopeSpec:
    """Finite-time funnel parameters minus the initial error, which is sampled
    from the measured state when the run starts."""

    delta: float = 0.1
    lambda_inf: float = 0.01
    t_f: float = 1.5

    def __post_init__(self) -> None:
        # Full invariants are enforced on materialization; fail early on the
        # parts that do not involve e0.
        if not (self.delta > self.lambda_inf > 0.0):
            raise ValueError("require delta > lambda_inf > 0")
        if not self.t_f > 0.0:
            raise ValueError("require t_f > 0")

    def materialize(self, e0: float) -> NovelPpfParams:
        return NovelPpfParams(e0=e0, delta=self.delta,
                              lambda_inf=self.lambda_inf, t_f=self.t_f)


@dataclass(frozen=True)
class Scenario:
    """Deterministic description of one closed-loop run."""

    name: str = "scenario"
    plant: ChannelParams = ChannelParams()
    disturbance: DisturbanceSpec = DisturbanceSpec()
    trajectory: TrajectorySpec = TrajectorySpec()
    envelope: NovelEnvelopeSpec | ExpPpfParams = NovelEnvelopeSpec()
    transform: str = "arctan"
    surface: SurfaceParams = SurfaceParams()
    gains: GainConfig = GainConfig()
    w1_z_term: str = "zs"
    alpha0: float = 0.0        # initial attitude angle [rad]
    alpha0_rate: float = 0.0   # initial attitude rate [rad/s]
    duration: float = 60.0     # [s]
    dt: float = 1e-3           # [s]

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ValueError("require dt > 0")
        if not self.duration >= self.dt:
            raise ValueError("require duration >= dt")
        n = round(self.duration / self.dt)
        if abs(n * self.dt - self.duration) > GRID_TOLERANCE * max(1.0, self.duration):
            raise ValueError("duration must be an integer number of dt steps")
        if self.transform not in ("arctan", "tanh"):
            raise ValueError(f"unknown transform {self.transform!r}")
        if self.w1_z_term not in ("zs", "z1"):
            raise ValueError(f"unknown w1_z_term {self.w1_z_term!r}")
        # The proposed scheme pairs the funnel with the arctan transform, the
        # baseline pairs the exponential envelope with tanh.
        if isinstance(self.envelope, NovelEnvelopeSpec):
            if self.transform != "arctan":
                raise ValueError("novel envelope must pair with arctan transform")
        elif isinstance(self.envelope, ExpPpfParams):
            if self.transform != "tanh":
                raise ValueError("exponential envelope must pair with tanh transform")
        else:
            raise TypeError(f"unsupported envelope spec {type(self.envelope)!r}")
        if not math.isfinite(self.alpha0) or not math.isfinite(self.alpha0_rate):
            raise ValueError("initial attitude must be finite")

    @property
    def n_steps(self) -> int:
        return round(self.duration / self.dt)

    def initial_error(self) -> tuple[float, float]:
        """(e1, e2) at t = 0: measured attitude minus reference."""
        xd, xd_dot, _ = self.trajectory.eval(0.0)
        return self.alpha0 - xd, self.alpha0_rate - xd_dot

    def terminal_band(self) -> float:
        """Steady-state half-width of the envelope."""
        if isinstance(self.envelope, NovelEnvelopeSpec):
            return self.envelope.lambda_inf
        return self.envelope.rho_inf

    def settle_reference_time(self) -> float:
        """Preset settling time for the funnel; for the exponential envelope,
        the time at which the bound is within 1% of its terminal value."""
        if isinstance(self.envelope, NovelEnvelopeSpec):
            return self.envelope.t_f
        env = self.envelope
        return math.log(100.0 * (env.rho0 - env.rho_inf) / env.rho_inf) / env.k


class TraceRow(NamedTuple):
    t: float
    alpha: float
    e1: float
    e2: float
    pu: float
    pl: float
    z1: float
    z2: float
    s: float
    v: float
    d: float
    m3: float
    a1est: float


@dataclass(frozen=True)
class ViolationRecord:
    """Details of the first containment failure."""

    t: float
    e: float
    pu: float
    pl: float


@dataclass
class Trace:
    """Column-wise log of one run, one row per accepted integrator step."""

    scenario: Scenario
    backend: str
    t: np.ndarray
    alpha: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    pu: np.ndarray
    pl: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    s: np.ndarray
    v: np.ndarray
    d: np.ndarray
    m3: np.ndarray
    a1est: np.ndarray
    violation: ViolationRecord | None = None
    diverged: bool = False

    def __len__(self) -> int:
        return len(self.t)

    @property
    def complete(self) -> bool:
        return self.violation is None and not self.diverged

    def row(self, i: int) -> TraceRow:
        return TraceRow(*(getattr(self, name)[i] for name in TraceRow._fields))

    def rows(self) -> Iterator[TraceRow]:
        for i in range(len(self.t)):
            yield self.row(i)


@dataclass(frozen=True)
class Metrics:
    """Scalar summary of one trace."""

    overshoot: float               # [rad], excursion past zero opposite e(0)
    settling_time: float           # [s], inf when never settled
    max_abs_error_after_tf: float  # [rad]
    envelope_violations: int
    sup_assumption1: float         # sup |d/dt(m3 * d)| estimate
    domain_violations: int

    @property
    def settled(self) -> bool:
        return math.isfinite(self.settling_time)


def _assumption1_column(m3: np.ndarray, d: np.ndarray, dt: float) -> np.ndarray:
    """Per-row |d/dt(m3 * d)| by central differences (one-sided at the ends)."""
    n = len(m3)
    est = np.zeros(n)
    if n < 2:
        return est
    prod = m3 * d
    est[1:-1] = np.abs(prod[2:] - prod[:-2]) / (2.0 * dt)
    est[0] = abs(prod[1] - prod[0]) / dt
    est[-1] = abs(prod[-1] - prod[-2]) / dt
    return est


def run(scenario: Scenario, backend: str | None = None) -> Trace:
    """Simulate one scenario and return its trace.

    Ends early with a violation record if the error ever reaches an envelope
    bound, and with diverged=True if the state stops being finite.
    """
    scenario.validate()
    backend = resolve_backend(backend)
    loop = get_run_loop(backend)

    e1_0, e2_0 = scenario.initial_error()
    env = scenario.envelope
    if isinstance(env, NovelEnvelopeSpec):
        params = env.materialize(e1_0)
        env_kind = _loop.ENV_NOVEL
        ep = (params.e0, params.delta, params.lambda_inf, params.t_f)
    else:
        env_kind = _loop.ENV_EXP
        ep = (env.rho0, env.rho_inf, env.k, 0.0)
        if not -env.rho0 < e1_0 < env.rho0:
            # Initial error already outside the baseline envelope: report a
            # violation at t = 0 instead of integrating.
            empty = np.empty(0)
            return Trace(
                scenario, backend, *([empty] * 13),
                violation=ViolationRecord(0.0, e1_0, env.rho0, -env.rho0),
            )

    tr_kind = _loop.TR_ARCTAN if scenario.transform == "arctan" else _loop.TR_TANH
    zterm = _loop.ZTERM_ZS if scenario.w1_z_term == "zs" else _loop.ZTERM_Z1
    n_steps = scenario.n_steps
    out = np.empty((n_steps + 1, len(_loop.COLUMNS)))

    status, rows, vt, ve, vpu, vpl = loop(
        out, n_steps, scenario.dt, e1_0, e2_0,
        env_kind, *ep,
        tr_kind,
        scenario.surface.gamma1, scenario.surface.gamma2, scenario.surface.p,
        scenario.gains.l1, scenario.gains.l2, scenario.gains.l3,
        scenario.gains.l4, scenario.gains.m, zterm,
        scenario.plant.g, *scenario.plant.f_coeffs,
        scenario.disturbance.amplitude, scenario.disturbance.frequency,
        scenario.disturbance.phase,
        scenario.trajectory.amplitude, scenario.trajectory.frequency,
        scenario.trajectory.phase, scenario.trajectory.offset,
    )

    out = out[:rows]
    cols = {name: np.ascontiguousarray(out[:, i])
            for i, name in enumerate(_loop.COLUMNS)}
    a1est = _assumption1_column(cols["m3"], cols["d"], scenario.dt)
    return Trace(
        scenario=scenario,
        backend=backend,
        a1est=a1est,
        violation=(ViolationRecord(vt, ve, vpu, vpl)
                   if status == _loop.STATUS_VIOLATION else None),
        diverged=status == _loop.STATUS_DIVERGED,
        **cols,
    )


def metrics(trace: Trace, lambda_inf: float, t_f: float) -> Metrics:
    """Summarize a trace against a terminal band and a settling reference time.

    Overshoot is the excursion past zero on the side opposite the initial
    error sign (zero when the error never crosses); settling time is the
    earliest instant after which |e1| stays below lambda_inf.
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    e1 = trace.e1
    e0 = e1[0]
    if e0 < 0.0:
        overshoot = max(0.0, float(np.max(e1)))
    elif e0 > 0.0:
        overshoot = max(0.0, float(-np.min(e1)))
    else:
        overshoot = 0.0

    outside = np.abs(e1) >= lambda_inf
    if not outside.any():
        settling = float(trace.t[0])
    elif outside[-1]:
        settling = math.inf
    else:
        settling = float(trace.t[np.nonzero(outside)[0][-1] + 1])

    tail = trace.t >= t_f
    max_after = float(np.max(np.abs(e1[tail]))) if tail.any() else math.nan

    domain = OperatingDomain()
    if trace.scenario.plant.channel == "elevation":
        viol = (trace.alpha < domain.alpha_min) | (trace.alpha > domain.alpha_max)
    else:
        viol = (trace.alpha < domain.beta_min) | (trace.alpha > domain.beta_max)

    return Metrics(
        overshoot=overshoot,
        settling_time=settling,
        max_abs_error_after_tf=max_after,
        envelope_violations=0 if trace.violation is None else 1,
        sup_assumption1=float(np.max(trace.a1est)) if len(trace) else 0.0,
        domain_violations=int(np.count_nonzero(viol)),
    )


def scenario_metrics(trace: Trace) -> Metrics:
    """Metrics with band and reference time taken from the trace's scenario."""
    sc = trace.scenario
    return metrics(trace, sc.terminal_band(), sc.settle_reference_time())


def monitor_assumption1(trace: Trace) -> float:
    """Supremum of the per-step |d/dt(m3 * d)| estimate.  Reported, never
    enforced: it witnesses the bounded-disturbance-rate assumption."""
    if len(trace) < 3:
        raise ValueError("need at least 3 rows to estimate a derivative")
    return float(np.max(trace.a1est))


@dataclass(frozen=True)
class ComparisonReport:
    """Side-by-side metrics of two runs on the same grid."""

    metrics_a: Metrics
    metrics_b: Metrics
    delta_e1: np.ndarray           # e1_a - e1_b per row
    steady_window: tuple[float, float]
    steady_max_abs_a: float
    steady_max_abs_b: float
    overshoot_a_smaller: bool
    steady_a_not_worse: bool


def compare(
    trace_a: Trace,
    trace_b: Trace,
    steady_window: tuple[float, float] | None = None,
) -> ComparisonReport:
    """Compare two traces (proposed vs baseline) sharing dt and duration."""
    if trace_a.scenario.dt != trace_b.scenario.dt:
        raise ValueError("traces have different dt")
    if trace_a.scenario.duration != trace_b.scenario.duration:
        raise ValueError("traces have different duration")
    if len(trace_a) != len(trace_b):
        raise ValueError("traces have different lengths (one ended early?)")
    if steady_window is None:
        steady_window = (10.0, trace_a.scenario.duration)

    ma = scenario_metrics(trace_a)
    mb = scenario_metrics(trace_b)
    lo, hi = steady_window
    win = (trace_a.t >= lo) & (trace_a.t <= hi)
    if not win.any():
        raise ValueError("steady window contains no samples")
    sa = float(np.max(np.abs(trace_a.e1[win])))
    sb = float(np.max(np.abs(trace_b.e1[win])))
    return ComparisonReport(
        metrics_a=ma,
        metrics_b=mb,
        delta_e1=trace_a.e1 - trace_b.e1,
        steady_window=steady_window,
        steady_max_abs_a=sa,
        steady_max_abs_b=sb,
        overshoot_a_smaller=ma.overshoot < mb.overshoot,
        steady_a_not_worse=sa <= sb,
    )


# --- built-in scenarios ------------------------------------------------------

def case1() -> Scenario:
    """Elevation tracking with the finite-time funnel: initial angle -24 deg,
    disturbance 0.2 sin(t), funnel (delta=0.1, lambda_inf=0.01, t_f=1.5)."""
    return Scenario(
        name="case1",
        plant=ChannelParams(),
        disturbance=DisturbanceSpec(amplitude=0.2, frequency=1.0, phase=0.0),
        trajectory=TrajectorySpec(),
        envelope=NovelEnvelopeSpec(delta=0.1, lambda_inf=0.01, t_f=1.5),
        transform="arctan",
        alpha0=math.radians(-24.0),
        duration=60.0,
        dt=1e-3,
    )


def case2_pair() -> tuple[Scenario, Scenario]:
    """Contrast experiment: the case1 setup against the exponential-envelope
    baseline (rho0=0.48, rho_inf=0.01, k=2) with the tanh transform."""
    proposed = replace(case1(), name="case2_proposed")
    baseline = replace(
        proposed,
        name="case2_baseline",
        envelope=ExpPpfParams(rho0=0.48, rho_inf=0.01, k=2.0),
        transform="tanh",
    )
    return proposed, baseline


def builtin_scenarios(name: str) -> tuple[Scenario, ...]:
    """Scenarios behind a built-in case name ('case1' or 'case2')."""
    if name == "case1":
        return (case1(),)
    if name == "case2":
        return case2_pair()
    raise KeyError(f"unknown built-in case {name!r}")
