"""Prescribed-performance attitude tracking simulation for a 3-DOF
helicopter error model.

Submodules:

* ppf        -- finite-time funnel and exponential performance envelopes
* transform  -- constrained/unconstrained error transformations
* controller -- nonsingular integral sliding-mode finite-time control law
* plant      -- tracking-error dynamics, reference trajectory, operating domain
* simulator  -- scenario definition, RK4 closed loop, metrics, comparison
* config     -- scenario config file parsing and canonical writing
* report     -- CSV/plot/report emission
* cli        -- command-line front end

The closed-loop integrator runs on a compiled kernel when the extension is
built, falling back to a pure-Python kernel otherwise; see
helippc.backend_info().
"""

from ._backends import HAVE_COMPILED, available_backends, default_backend
from .simulator import (
    Scenario,
    Trace,
    builtin_scenarios,
    case1,
    case2_pair,
    compare,
    metrics,
    monitor_assumption1,
    run,
    scenario_metrics,
)

__version__ = "0.1.0"

__all__ = [
    "Scenario",
    "Trace",
    "available_backends",
    "backend_info",
    "builtin_scenarios",
    "case1",
    "case2_pair",
    "compare",
    "default_backend",
    "metrics",
    "monitor_assumption1",
    "run",
    "scenario_metrics",
]


def backend_info() -> str:
    kind = "compiled extension" if HAVE_COMPILED else "pure Python (extension not built)"
    return f"default integration kernel: {default_backend()} ({kind})"
