"""Numba-jitted twins of the kernels in ``_kernels_numpy``.

Same four entry points, same semantics, scalar inner loops instead of
vectorized matrices.  Compiled lazily with on-disk caching so repeat runs
pay no JIT cost.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

LOG2 = math.log(2.0)
EPS = 2.220446049250313e-16
DECAY_WINDOW = 46.0


@njit(cache=True)
def _logaddexp(x, y):
    if x == -np.inf:
        return y
    if y == -np.inf:
        return x
    if x >= y:
        return x + math.log1p(math.exp(y - x))
    return y + math.log1p(math.exp(x - y))


@njit(cache=True)
def series_term_block(log_a, n0, alpha, beta, mu, nu, log_abs_z, z_negative, log_r2):
    m = log_a.shape[0]
    out = np.empty(m)
    lgnu = math.lgamma(nu)
    for i in range(m):
        n = float(n0 + i)
        la = log_a[i]
        logw = math.lgamma(nu + n) - lgnu - math.lgamma(n + 1.0)
        logden = _logaddexp(alpha * la, log_r2)
        t = math.exp(LOG2 + logw + beta * la + n * log_abs_z - mu * logden)
        if z_negative and ((n0 + i) & 1) == 1:
            t = -t
        out[i] = t
    return out


@njit(cache=True)
def weighted_series_eval(lc, sg, logx, x_negative, logw):
    nx = logx.shape[0]
    nc = lc.shape[0]
    vals = np.empty(nx)
    errs = np.empty(nx)
    conv = np.empty(nx, dtype=np.bool_)
    for j in range(nx):
        lx = logx[j]
        lw = logw[j]
        s = 0.0
        comp = 0.0  # Neumaier carry
        peak = -np.inf
        nlive = 0
        last = -np.inf
        done = False
        for n in range(nc):
            e = lc[n] + n * lx + lw
            last = e
            if e > peak:
                peak = e
            if e > peak - DECAY_WINDOW:
                nlive += 1
            t = sg[n] * math.exp(e)
            if x_negative and (n & 1) == 1:
                t = -t
            y = s + t
            if abs(s) >= abs(t):
                comp += (s - y) + t
            else:
                comp += (t - y) + s
            s = y
            if n > 4 and e < peak - (DECAY_WINDOW + 8.0):
                done = True
                break
        vals[j] = s + comp
        if peak == -np.inf:
            errs[j] = 0.0
            conv[j] = True
        else:
            errs[j] = math.exp(peak) * EPS * nlive
            conv[j] = done or (last < peak - DECAY_WINDOW)
    return vals, errs, conv


@njit(cache=True)
def bessel_j_series(order, x):
    m = x.shape[0]
    out = np.empty(m)
    lg = math.lgamma(order + 1.0)
    for i in range(m):
        xi = x[i]
        if xi == 0.0:
            out[i] = 1.0 if order == 0.0 else 0.0
            continue
        q = 0.25 * xi * xi
        term = math.exp(order * math.log(0.5 * xi) - lg)
        acc = term
        for k in range(1, 400):
            term = -term * q / (k * (k + order))
            acc += term
            if abs(term) <= 1e-18 * abs(acc) + 1e-300:
                break
        out[i] = acc
    return out


@njit(cache=True)
def bessel_j_asym(order, x):
    m = x.shape[0]
    out = np.empty(m)
    mu4 = 4.0 * order * order
    for i in range(m):
        xi = x[i]
        p = 1.0
        q = 0.0
        term = 1.0
        prev = np.inf
        for k in range(1, 34):
            num = mu4 - (2 * k - 1) ** 2
            term = term * num / (8.0 * k * xi)
            mag = abs(term)
            if mag >= prev or mag == 0.0:
                break
            r = k % 4
            if r == 1:
                q += term
            elif r == 2:
                p -= term
            elif r == 3:
                q -= term
            else:
                p += term
            prev = mag
        chi = xi - (0.5 * order + 0.25) * math.pi
        out[i] = math.sqrt(2.0 / (math.pi * xi)) * (p * math.cos(chi) - q * math.sin(chi))
    return out
