"""Pure-Python closed-loop integration kernel.

One fixed-step classical RK4 pass over the coupled 4-state system
(e1, e2, int_zs, int_robust), with the envelope, transform and control law
evaluated at every sub-stage time.  This is the fallback backend; the Cython
kernel in _loop_cy.pyx implements the identical arithmetic (same expression
order, no FMA contraction) and is preferred when importable.

The kernel is deliberately flat and scalar: per-step numpy would dominate
the runtime, and keeping the arithmetic in plain doubles keeps the two
backends numerically in lockstep.
"""

from __future__ import annotations

import math

import numpy as np

STATUS_OK = 0
STATUS_VIOLATION = 1
STATUS_DIVERGED = 2

ENV_NOVEL = 0
ENV_EXP = 1
TR_ARCTAN = 0
TR_TANH = 1
ZTERM_ZS = 0
ZTERM_Z1 = 1

# Column layout of the trace buffer written by the kernels.
COLUMNS = ("t", "alpha", "e1", "e2", "pu", "pl", "z1", "z2", "s", "v", "d", "m3")

# Funnel terminal-branch guards; keep in sync with _loop_cy.pyx.
_TERMINAL_FRACTION = 1e-12
_EXPONENT_FLOOR = -700.0


class _Violation(Exception):
    pass


def run_loop(
    out: np.ndarray,
    n_steps: int,
    dt: float,
    e1_0: float,
    e2_0: float,
    env_kind: int,
    ep0: float,
    ep1: float,
    ep2: float,
    ep3: float,
    tr_kind: int,
    gamma1: float,
    gamma2: float,
    p: float,
    l1: float,
    l2: float,
    l3: float,
    l4: float,
    m: float,
    zterm_kind: int,
    g: float,
    c0: float,
    c1: float,
    c2: float,
    c3: float,
    d_amp: float,
    d_freq: float,
    d_phase: float,
    r_amp: float,
    r_freq: float,
    r_phase: float,
    r_offset: float,
) -> tuple[int, int, float, float, float, float]:
    """Fill out[0:rows, :] (shape (n_steps + 1, 12), C order) and return
    (status, rows, viol_t, viol_e, viol_pu, viol_pl)."""
    # Envelope constants
    if env_kind == ENV_NOVEL:
        lam = ep2
        t_f = ep3
        au = ep0 + ep1 - ep2
        al = ep0 - ep1 + ep2
        term_edge = _TERMINAL_FRACTION * t_f
    else:
        rho_inf = ep1
        k_exp = ep2
        rho_gap = ep0 - ep1

    # Controller exponents
    q_zs = 2.0 * p / (1.0 + p)
    q_w = (m - 1.0) / m
    q_rob = (m - 2.0) / m

    sin = math.sin
    cos = math.cos
    tan = math.tan
    exp = math.exp
    atanh = math.atanh
    cosh = math.cosh
    sinh = math.sinh
    pow_ = math.pow
    pi = math.pi

    def rhs(t, e1, e2, izs, irob):
        # reference trajectory
        arg = r_freq * t + r_phase
        xd = r_amp * sin(arg) + r_offset

        # envelope sample
        if env_kind == ENV_NOVEL:
            if t >= t_f or (t_f - t) < term_edge:
                pu = lam
                pl = -lam
                pud = pld = pudd = pldd = 0.0
            else:
                u = t_f - t
                ex = 1.0 - t_f / u
                if ex < _EXPONENT_FLOOR:
                    ex = _EXPONENT_FLOOR
                w_ = exp(ex)
                r = (u / t_f) * w_
                rd = -w_ * (1.0 / t_f + 1.0 / u)
                rdd = w_ * t_f / (u * u * u)
                pu = au * r + lam
                pl = al * r - lam
                pud = au * rd
                pld = al * rd
                pudd = au * rdd
                pldd = al * rdd
        else:
            core = rho_gap * exp(-k_exp * t)
            pu = core + rho_inf
            pl = -pu
            pud = -k_exp * core
            pld = -pud
            pudd = k_exp * k_exp * core
            pldd = -pudd

        # containment check (strict)
        if e1 <= pl or e1 >= pu:
            raise _Violation(t, e1, pu, pl)

        # transform
        w = pu - pl
        xi = (e1 - pl) / w
        if tr_kind == TR_ARCTAN:
            z1 = tan(pi * (xi - 0.5))
            gain = pi * (1.0 + z1 * z1)
            dgain = 2.0 * pi * z1
        else:
            z1 = atanh(2.0 * xi - 1.0)
            ch = cosh(z1)
            gain = 2.0 * ch * ch
            dgain = 2.0 * sinh(2.0 * z1)
        m3v = gain / w
        wd = pud - pld
        wdd = pudd - pldd
        xi_dot = ((e2 - pld) - xi * wd) / w
        z2 = gain * xi_dot
        n = dgain * gain * xi_dot * xi_dot \
            + gain * (-pldd - 2.0 * xi_dot * wd - xi * wdd) / w

        # controller
        s = z2 + izs
        if z1 > 0.0:
            zs = gamma1 * pow_(z1, p)
        elif z1 < 0.0:
            zs = -gamma1 * pow_(-z1, p)
        else:
            zs = 0.0
        if z2 > 0.0:
            zs += gamma2 * pow_(z2, q_zs)
        elif z2 < 0.0:
            zs -= gamma2 * pow_(-z2, q_zs)
        if s > 0.0:
            sw = pow_(s, q_w)
            srob = l3 * pow_(s, q_rob)
        elif s < 0.0:
            sw = -pow_(-s, q_w)
            srob = -l3 * pow_(-s, q_rob)
        else:
            sw = 0.0
            srob = 0.0
        zterm = zs if zterm_kind == ZTERM_ZS else z1
        w1 = -l1 * sw - l2 * s - zterm - n - irob

        # plant
        f1 = c0 + c1 * e1 + c2 * e2 + c3 * sin(e1)
        v = (w1 / m3v - f1) / g
        dval = d_amp * sin(d_freq * t + d_phase)

        return (
            e2,
            g * v + f1 + dval,
            zs,
            srob + l4 * s,
            e1 + xd,
            pu,
            pl,
            z1,
            z2,
            s,
            v,
            dval,
            m3v,
        )

    e1 = e1_0
    e2 = e2_0
    izs = 0.0
    irob = 0.0
    h2 = 0.5 * dt
    h6 = dt / 6.0
    isfinite = math.isfinite

    k = 0
    while True:
        t = k * dt
        try:
            r = rhs(t, e1, e2, izs, irob)
        except _Violation as ex:
            vt, ve, vpu, vpl = ex.args
            return STATUS_VIOLATION, k, vt, ve, vpu, vpl
        row = out[k]
        row[0] = t
        row[1] = r[4]
        row[2] = e1
        row[3] = e2
        row[4] = r[5]
        row[5] = r[6]
        row[6] = r[7]
        row[7] = r[8]
        row[8] = r[9]
        row[9] = r[10]
        row[10] = r[11]
        row[11] = r[12]
        if k == n_steps:
            return STATUS_OK, n_steps + 1, 0.0, 0.0, 0.0, 0.0

        a1, a2, a3, a4 = r[0], r[1], r[2], r[3]
        try:
            rb = rhs(t + h2, e1 + h2 * a1, e2 + h2 * a2, izs + h2 * a3, irob + h2 * a4)
            b1, b2, b3, b4 = rb[0], rb[1], rb[2], rb[3]
            rc = rhs(t + h2, e1 + h2 * b1, e2 + h2 * b2, izs + h2 * b3, irob + h2 * b4)
            c1_, c2_, c3_, c4_ = rc[0], rc[1], rc[2], rc[3]
            rd_ = rhs(t + dt, e1 + dt * c1_, e2 + dt * c2_, izs + dt * c3_, irob + dt * c4_)
            d1, d2, d3, d4 = rd_[0], rd_[1], rd_[2], rd_[3]
        except _Violation as ex:
            vt, ve, vpu, vpl = ex.args
            return STATUS_VIOLATION, k + 1, vt, ve, vpu, vpl
        e1 = e1 + h6 * (a1 + 2.0 * (b1 + c1_) + d1)
        e2 = e2 + h6 * (a2 + 2.0 * (b2 + c2_) + d2)
        izs = izs + h6 * (a3 + 2.0 * (b3 + c3_) + d3)
        irob = irob + h6 * (a4 + 2.0 * (b4 + c4_) + d4)
        if not (isfinite(e1) and isfinite(e2) and isfinite(izs) and isfinite(irob)):
            return STATUS_DIVERGED, k + 1, 0.0, 0.0, 0.0, 0.0
        k += 1
