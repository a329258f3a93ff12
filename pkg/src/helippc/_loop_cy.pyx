# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled closed-loop integration kernel.

Transliteration of _loop.py with identical expression order; compiled with
-ffp-contract=off so both backends stay numerically in lockstep.  Keep the
two files in sync when changing either.
"""

from libc.math cimport M_PI, atanh, cos, cosh, exp, isfinite, pow, sin, sinh, tan

STATUS_OK = 0
STATUS_VIOLATION = 1
STATUS_DIVERGED = 2

DEF ENV_NOVEL = 0
DEF TR_ARCTAN = 0
DEF ZTERM_ZS = 0

# Funnel terminal-branch guards; keep in sync with _loop.py.
DEF TERMINAL_FRACTION = 1e-12
DEF EXPONENT_FLOOR = -700.0


cdef struct Params:
    int env_kind
    int tr_kind
    int zterm_kind
    double lam, t_f, au, al, term_edge          # novel envelope
    double rho_inf, k_exp, rho_gap              # exponential envelope
    double gamma1, gamma2, p, q_zs, q_w, q_rob
    double l1, l2, l3, l4
    double g, c0, c1, c2, c3
    double d_amp, d_freq, d_phase
    double r_amp, r_freq, r_phase, r_offset


cdef int _rhs(Params *pp, double t, double e1, double e2, double izs,
              double irob, double *o, double *viol) nogil:
    """Derivatives o[0..3], diagnostics o[4..12] (alpha, pu, pl, z1, z2, s,
    v, d, m3).  Returns 1 on containment failure with viol = (t, e1, pu, pl)."""
    cdef double arg, xd, pu, pl, pud, pld, pudd, pldd
    cdef double u, ex, w_, r, rd, rdd, core
    cdef double w, xi, z1, gain, dgain, ch, m3v, wd, wdd, xi_dot, z2, n
    cdef double s, zs, sw, srob, zterm, w1, f1, v, dval

    arg = pp.r_freq * t + pp.r_phase
    xd = pp.r_amp * sin(arg) + pp.r_offset

    if pp.env_kind == ENV_NOVEL:
        if t >= pp.t_f or (pp.t_f - t) < pp.term_edge:
            pu = pp.lam
            pl = -pp.lam
            pud = 0.0
            pld = 0.0
            pudd = 0.0
            pldd = 0.0
        else:
            u = pp.t_f - t
            ex = 1.0 - pp.t_f / u
            if ex < EXPONENT_FLOOR:
                ex = EXPONENT_FLOOR
            w_ = exp(ex)
            r = (u / pp.t_f) * w_
            rd = -w_ * (1.0 / pp.t_f + 1.0 / u)
            rdd = w_ * pp.t_f / (u * u * u)
            pu = pp.au * r + pp.lam
            pl = pp.al * r - pp.lam
            pud = pp.au * rd
            pld = pp.al * rd
            pudd = pp.au * rdd
            pldd = pp.al * rdd
    else:
        core = pp.rho_gap * exp(-pp.k_exp * t)
        pu = core + pp.rho_inf
        pl = -pu
        pud = -pp.k_exp * core
        pld = -pud
        pudd = pp.k_exp * pp.k_exp * core
        pldd = -pudd

    if e1 <= pl or e1 >= pu:
        viol[0] = t
        viol[1] = e1
        viol[2] = pu
        viol[3] = pl
        return 1

    w = pu - pl
    xi = (e1 - pl) / w
    if pp.tr_kind == TR_ARCTAN:
        z1 = tan(M_PI * (xi - 0.5))
        gain = M_PI * (1.0 + z1 * z1)
        dgain = 2.0 * M_PI * z1
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

    s = z2 + izs
    if z1 > 0.0:
        zs = pp.gamma1 * pow(z1, pp.p)
    elif z1 < 0.0:
        zs = -pp.gamma1 * pow(-z1, pp.p)
    else:
        zs = 0.0
    if z2 > 0.0:
        zs += pp.gamma2 * pow(z2, pp.q_zs)
    elif z2 < 0.0:
        zs -= pp.gamma2 * pow(-z2, pp.q_zs)
    if s > 0.0:
        sw = pow(s, pp.q_w)
        srob = pp.l3 * pow(s, pp.q_rob)
    elif s < 0.0:
        sw = -pow(-s, pp.q_w)
        srob = -pp.l3 * pow(-s, pp.q_rob)
    else:
        sw = 0.0
        srob = 0.0
    zterm = zs if pp.zterm_kind == ZTERM_ZS else z1
    w1 = -pp.l1 * sw - pp.l2 * s - zterm - n - irob

    f1 = pp.c0 + pp.c1 * e1 + pp.c2 * e2 + pp.c3 * sin(e1)
    v = (w1 / m3v - f1) / pp.g
    dval = pp.d_amp * sin(pp.d_freq * t + pp.d_phase)

    o[0] = e2
    o[1] = pp.g * v + f1 + dval
    o[2] = zs
    o[3] = srob + pp.l4 * s
    o[4] = e1 + xd
    o[5] = pu
    o[6] = pl
    o[7] = z1
    o[8] = z2
    o[9] = s
    o[10] = v
    o[11] = dval
    o[12] = m3v
    return 0


def run_loop(
    double[:, ::1] out,
    int n_steps,
    double dt,
    double e1_0,
    double e2_0,
    int env_kind,
    double ep0,
    double ep1,
    double ep2,
    double ep3,
    int tr_kind,
    double gamma1,
    double gamma2,
    double p,
    double l1,
    double l2,
    double l3,
    double l4,
    double m,
    int zterm_kind,
    double g,
    double c0,
    double c1,
    double c2,
    double c3,
    double d_amp,
    double d_freq,
    double d_phase,
    double r_amp,
    double r_freq,
    double r_phase,
    double r_offset,
):
    """Same contract as _loop.run_loop."""
    cdef Params pp
    pp.env_kind = env_kind
    pp.tr_kind = tr_kind
    pp.zterm_kind = zterm_kind
    if env_kind == ENV_NOVEL:
        pp.lam = ep2
        pp.t_f = ep3
        pp.au = ep0 + ep1 - ep2
        pp.al = ep0 - ep1 + ep2
        pp.term_edge = TERMINAL_FRACTION * ep3
        pp.rho_inf = 0.0
        pp.k_exp = 0.0
        pp.rho_gap = 0.0
    else:
        pp.lam = 0.0
        pp.t_f = 0.0
        pp.au = 0.0
        pp.al = 0.0
        pp.term_edge = 0.0
        pp.rho_inf = ep1
        pp.k_exp = ep2
        pp.rho_gap = ep0 - ep1
    pp.gamma1 = gamma1
    pp.gamma2 = gamma2
    pp.p = p
    pp.q_zs = 2.0 * p / (1.0 + p)
    pp.q_w = (m - 1.0) / m
    pp.q_rob = (m - 2.0) / m
    pp.l1 = l1
    pp.l2 = l2
    pp.l3 = l3
    pp.l4 = l4
    pp.g = g
    pp.c0 = c0
    pp.c1 = c1
    pp.c2 = c2
    pp.c3 = c3
    pp.d_amp = d_amp
    pp.d_freq = d_freq
    pp.d_phase = d_phase
    pp.r_amp = r_amp
    pp.r_freq = r_freq
    pp.r_phase = r_phase
    pp.r_offset = r_offset

    cdef double e1 = e1_0
    cdef double e2 = e2_0
    cdef double izs = 0.0
    cdef double irob = 0.0
    cdef double h2 = 0.5 * dt
    cdef double h6 = dt / 6.0
    cdef double t
    cdef double ra[13]
    cdef double rb[13]
    cdef double rc[13]
    cdef double rd[13]
    cdef double viol[4]
    cdef int k = 0
    cdef int rows = 0
    cdef int status = 0      # 0 ok, 1 violation, 2 diverged (STATUS_* values)
    cdef int flag

    with nogil:
        while True:
            t = k * dt
            flag = _rhs(&pp, t, e1, e2, izs, irob, ra, viol)
            if flag:
                status = 1
                rows = k
                break
            out[k, 0] = t
            out[k, 1] = ra[4]
            out[k, 2] = e1
            out[k, 3] = e2
            out[k, 4] = ra[5]
            out[k, 5] = ra[6]
            out[k, 6] = ra[7]
            out[k, 7] = ra[8]
            out[k, 8] = ra[9]
            out[k, 9] = ra[10]
            out[k, 10] = ra[11]
            out[k, 11] = ra[12]
            if k == n_steps:
                rows = n_steps + 1
                break

            flag = _rhs(&pp, t + h2, e1 + h2 * ra[0], e2 + h2 * ra[1],
                        izs + h2 * ra[2], irob + h2 * ra[3], rb, viol)
            if not flag:
                flag = _rhs(&pp, t + h2, e1 + h2 * rb[0], e2 + h2 * rb[1],
                            izs + h2 * rb[2], irob + h2 * rb[3], rc, viol)
            if not flag:
                flag = _rhs(&pp, t + dt, e1 + dt * rc[0], e2 + dt * rc[1],
                            izs + dt * rc[2], irob + dt * rc[3], rd, viol)
            if flag:
                status = 1
                rows = k + 1
                break
            e1 = e1 + h6 * (ra[0] + 2.0 * (rb[0] + rc[0]) + rd[0])
            e2 = e2 + h6 * (ra[1] + 2.0 * (rb[1] + rc[1]) + rd[1])
            izs = izs + h6 * (ra[2] + 2.0 * (rb[2] + rc[2]) + rd[2])
            irob = irob + h6 * (ra[3] + 2.0 * (rb[3] + rc[3]) + rd[3])
            if not (isfinite(e1) and isfinite(e2) and isfinite(izs) and isfinite(irob)):
                status = 2
                rows = k + 1
                break
            k += 1

    if status == 1:
        return status, rows, viol[0], viol[1], viol[2], viol[3]
    return status, rows, 0.0, 0.0, 0.0, 0.0
