"""Pure-numpy implementations of the hot numeric kernels.

This is the fallback backend; ``_kernels_numba`` implements the same four
functions as jitted scalar loops.  Select with MATHIEU_KIT_BACKEND.

All kernels work in log space so that huge sequence values (``a_n`` of
factorial size) and tiny tail terms never overflow or underflow silently.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

LOG2 = math.log(2.0)
EPS = np.finfo(np.float64).eps
# a term whose log-magnitude is this far below the running peak cannot move
# a float64 sum
DECAY_WINDOW = 46.0


def series_term_block(log_a, n0, alpha, beta, mu, nu, log_abs_z, z_negative, log_r2):
    """Signed terms t_n = 2 a_n^beta ((nu)_n/n!) z^n / (a_n^alpha + r^2)^mu.

    ``log_a`` holds log(a_n) for n = n0 .. n0+len-1; ``log_r2`` is log(r^2)
    or -inf when r = 0.  |z| is passed through its log; a zero z never
    reaches the kernel.
    """
    m = log_a.shape[0]
    n = np.arange(n0, n0 + m, dtype=np.float64)
    logw = gammaln(nu + n) - math.lgamma(nu) - gammaln(n + 1.0)
    logden = np.logaddexp(alpha * log_a, log_r2)
    logt = LOG2 + logw + beta * log_a + n * log_abs_z - mu * logden
    t = np.exp(logt)
    if z_negative:
        odd = (np.arange(n0, n0 + m) & 1) == 1
        np.negative(t, out=t, where=odd)
    return t


def weighted_series_eval(lc, sg, logx, x_negative, logw):
    """Evaluate sum_n sg_n (sign x)^n exp(lc_n + n*logx_j + logw_j) per node j.

    Shared workhorse for the Fox-Wright and pFq integral kernels: ``lc``
    holds log coefficient magnitudes (including the 1/n!), ``sg`` their
    signs, ``logx`` the per-node log|x| and ``logw`` a per-node log weight
    folded in to avoid overflow of large intermediate terms.

    Returns (values, abs error estimates, converged flags).  A node is
    converged when its terms have fallen DECAY_WINDOW below their running
    peak by the end of the coefficient table.
    """
    nx = logx.shape[0]
    nc = lc.shape[0]
    vals = np.empty(nx)
    errs = np.empty(nx)
    conv = np.empty(nx, dtype=np.bool_)
    n = np.arange(nc, dtype=np.float64)
    signs = sg.astype(np.float64).copy()
    if x_negative:
        signs[1::2] *= -1.0

    chunk = max(1, 4_000_000 // nc)
    for i0 in range(0, nx, chunk):
        i1 = min(nx, i0 + chunk)
        expo = lc[None, :] + np.outer(logx[i0:i1], n) + logw[i0:i1, None]
        peak = np.max(expo, axis=1)
        terms = np.exp(expo) * signs[None, :]
        for j in range(i0, i1):
            vals[j] = math.fsum(terms[j - i0])
        live = expo > (peak[:, None] - DECAY_WINDOW)
        errs[i0:i1] = np.exp(peak) * EPS * np.count_nonzero(live, axis=1)
        conv[i0:i1] = (expo[:, -1] < peak - DECAY_WINDOW) | (peak == -np.inf)
    return vals, errs, conv


def bessel_j_series(order, x):
    """Ascending series for J_order, elementwise over x (small-x regime)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0.0
    if order == 0.0:
        out[~pos] = 1.0
    if not np.any(pos):
        return out
    xp = x[pos]
    q = 0.25 * xp * xp
    term = np.exp(order * np.log(0.5 * xp) - math.lgamma(order + 1.0))
    acc = term.copy()
    for k in range(1, 400):
        term = -term * q / (k * (k + order))
        acc += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(acc) + 1e-300):
            break
    out[pos] = acc
    return out


def bessel_j_asym(order, x):
    """Hankel asymptotic expansion of J_order for large x.

    Truncated at the smallest term per element; exact (terminating) for
    half-integer orders.
    """
    x = np.asarray(x, dtype=np.float64)
    mu4 = 4.0 * order * order
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=np.bool_)
    for k in range(1, 34):
        num = mu4 - (2 * k - 1) ** 2
        term = term * num / (8.0 * k * x)
        mag = np.abs(term)
        # stop an element once its terms start growing
        active &= mag < prev
        if not np.any(active):
            break
        upd = active & (mag > 0)
        if k % 4 == 1:
            q[upd] += term[upd]
        elif k % 4 == 2:
            p[upd] -= term[upd]
        elif k % 4 == 3:
            q[upd] -= term[upd]
        else:
            p[upd] += term[upd]
        prev = mag.copy()
    chi = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))
