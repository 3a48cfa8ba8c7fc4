"""Direct summation of the weighted Mathieu-type power series

    S(r) = sum_{n>=1} 2 a_n^beta ((nu)_n / n!) z^n / (a_n^alpha + r^2)^mu

over a caller-chosen positive divergent sequence a_n, with convergence
guards and certified tail bounds.  This module is the reference route that
every integral representation in ``quadrature`` is validated against.

Tail certification is regime dependent: a geometric-ratio majorant for
|z| < 1 or factorially growing sequences, an integral-test majorant on
n^(nu-1+gamma(beta-mu*alpha)) at |z| = 1.  Heavy |z| = 1 evaluations with
integer Pochhammer weight switch to an exact rearrangement into
Euler-Maclaurin zeta tails (the binomial expansion of the denominator),
which is summation, not extrapolation.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln

from . import specfun
from ._backend import kernels
from .errors import ConvergenceError, DomainError, ToleranceNotReachedError
from .result import EvalResult

_EPS = 2.220446049250313e-16
_LOG2 = math.log(2.0)
_MAX_DIRECT_TERMS = 8_000_000
_FASTPATH_MIN_TERMS = 400_000


# ---------------------------------------------------------------------------
# parameter and sequence records


@dataclass(frozen=True)
class SeriesParams:
    """The tuple (alpha, beta, mu, nu, r, z) of the series above."""

    alpha: float
    beta: float
    mu: float
    nu: float
    r: float
    z: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.mu > 0 and self.nu > 0):
            raise DomainError("series parameters require alpha, mu, nu > 0")
        if self.beta < 0:
            raise DomainError("series exponent beta must be >= 0 (0 only for the "
                              "hypergeometric limit case)")
        if self.r < 0:
            raise DomainError("series argument r must be >= 0")
        if abs(self.z) > 1:
            raise DomainError("series argument z must lie in [-1, 1]")


@dataclass(frozen=True)
class PowerOfIndex:
    """a_n = n^gamma."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError("PowerOfIndex exponent gamma must be positive")


@dataclass(frozen=True)
class GammaArithmetic:
    """a_n = Gamma(gamma*n + delta)."""

    gamma: float
    delta: float

    def __post_init__(self):
        if not (self.gamma > 0 and self.delta > 0):
            raise DomainError("GammaArithmetic requires gamma > 0 and delta > 0")


@dataclass(frozen=True)
class ExplicitTable:
    """A finite, strictly increasing positive table of a_n values.

    ``tail_exponent`` declares the growth a_n ~ n^tail_exponent beyond the
    table; it is used for tail bounding only, never to evaluate terms.
    Pass NaN when the growth is unknown (convergence then reports
    "unknown" at |z| = 1).
    """

    values: tuple
    tail_exponent: float

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) == 0:
            raise DomainError("ExplicitTable needs at least one value")
        if vals[0] <= 0 or any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("ExplicitTable values must be positive and strictly increasing")


SequenceSpec = Union[PowerOfIndex, GammaArithmetic, ExplicitTable]


@dataclass(frozen=True)
class ConvergenceVerdict:
    verdict: str          # "converges" | "diverges" | "unknown"
    decay_exponent: float  # effective |term| ~ n^-p exponent at |z| = 1

    @property
    def converges(self) -> bool:
        return self.verdict == "converges"


def _log_a_block(seq: SequenceSpec, n0: int, count: int) -> np.ndarray:
    n = np.arange(n0, n0 + count, dtype=np.float64)
    if isinstance(seq, PowerOfIndex):
        return seq.gamma * np.log(n)
    if isinstance(seq, GammaArithmetic):
        return gammaln(seq.gamma * n + seq.delta)
    return np.log(np.asarray(seq.values[n0 - 1:n0 - 1 + count]))


# ---------------------------------------------------------------------------
# convergence guard


def check_convergence(params: SeriesParams, seq: SequenceSpec) -> ConvergenceVerdict:
    """Decide convergence of the series for these parameters.

    PowerOfIndex terms behave like n^(nu-1+gamma(beta-mu*alpha)) |z|^n, so
    |z| = 1 requires gamma(mu*alpha - beta) > nu; |z| < 1 always
    converges.  GammaArithmetic converges iff mu*alpha > beta (or = beta
    with |z| < 1).  ExplicitTable follows its declared tail exponent.
    """
    a, b, mu, nu, z = params.alpha, params.beta, params.mu, params.nu, params.z
    if z == 0.0:
        return ConvergenceVerdict("converges", math.inf)
    if isinstance(seq, GammaArithmetic):
        if mu * a > b:
            return ConvergenceVerdict("converges", math.inf)
        if mu * a == b:
            if abs(z) < 1:
                return ConvergenceVerdict("converges", 1.0 - nu)
            return ConvergenceVerdict("diverges", 1.0 - nu)
        return ConvergenceVerdict("diverges", -math.inf)
    gam = seq.gamma if isinstance(seq, PowerOfIndex) else seq.tail_exponent
    if math.isnan(gam):
        if abs(z) < 1 and mu * a >= b:
            # terms bounded by C |z|^n once a_n >= table minimum
            return ConvergenceVerdict("converges", math.nan)
        return ConvergenceVerdict("unknown", math.nan)
    p = gam * (mu * a - b) - (nu - 1.0)
    if abs(z) < 1:
        return ConvergenceVerdict("converges", p)
    return ConvergenceVerdict("converges" if p > 1.0 else "diverges", p)


def _require_convergent(params: SeriesParams, seq: SequenceSpec) -> None:
    v = check_convergence(params, seq)
    if v.converges:
        return
    a, b, mu, nu = params.alpha, params.beta, params.mu, params.nu
    if isinstance(seq, GammaArithmetic):
        raise ConvergenceError(
            f"series diverges: guard mu*alpha > beta fails ({mu * a} <= {b})")
    if v.verdict == "unknown":
        raise ConvergenceError(
            "cannot certify convergence: ExplicitTable has no usable tail exponent")
    gam = seq.gamma if isinstance(seq, PowerOfIndex) else seq.tail_exponent
    raise ConvergenceError(
        f"series diverges at |z| = 1: guard gamma*(mu*alpha - beta) > nu fails "
        f"({gam * (mu * a - b):g} <= {nu:g})")


# ---------------------------------------------------------------------------
# tail majorants for the direct path


def _w_log(nu: float, n: float) -> float:
    return math.lgamma(nu + n) - math.lgamma(nu) - math.lgamma(n + 1.0)


def _poly_tail_integral(gam, alpha, beta, mu, nu, N, extra_log=0.0):
    """Integral-test bound on sum_{n>N} 2 w_n n^{gam(beta-mu alpha)} at |z|=1.

    ``extra_log`` shifts the constant for table extrapolation.
    """
    p = gam * (mu * alpha - beta) - nu + 1.0
    if p <= 1.0:
        return math.inf
    g = math.exp(_w_log(nu, N) + (1.0 - nu) * math.log(N))
    big = 2.0 * max(g, 1.0 / math.gamma(nu)) * math.exp(extra_log)
    return big * N ** (1.0 - p) / (p - 1.0)


def _tail_bound(seq, alpha, beta, mu, nu, r, z, N, last_mag, table_done):
    az = abs(z)
    if isinstance(seq, GammaArithmetic):
        gam, dlt = seq.gamma, seq.delta
        expo = beta - alpha * mu
        q_log = math.lgamma(gam * (N + 1) + dlt) - math.lgamma(gam * N + dlt)
        rho = az * max(1.0, (N + nu) / (N + 1.0)) * math.exp(expo * q_log)
        if rho >= 1.0:
            return math.inf
        lu = (_LOG2 + _w_log(nu, N + 1.0) + (N + 1) * (math.log(az) if az < 1 else 0.0)
              + expo * math.lgamma(gam * (N + 1) + dlt))
        return math.exp(lu) / (1.0 - rho)
    if isinstance(seq, PowerOfIndex):
        gam = seq.gamma
        if az < 1.0:
            grow = max(1.0, (N + nu) / (N + 1.0))
            pw = max(1.0, ((N + 1.0) / N) ** (gam * beta))
            rho = az * grow * pw
            if rho >= 1.0:
                return math.inf
            return last_mag * rho / (1.0 - rho)
        return _poly_tail_integral(gam, alpha, beta, mu, nu, N)
    # ExplicitTable
    pt = seq.tail_exponent
    if az < 1.0 and not table_done:
        # remaining table entries: a_n >= a_N and mu*alpha >= beta make the
        # sequence factor shrink, leaving a pure w_n |z|^n geometric tail
        if mu * alpha < beta:
            return math.inf
        a_N = seq.values[N - 1]
        rho = az * max(1.0, (N + nu) / (N + 1.0))
        if rho >= 1.0:
            return math.inf
        lu = (_LOG2 + _w_log(nu, N + 1.0) + (N + 1) * math.log(az)
              + (beta - alpha * mu) * math.log(a_N))
        return math.exp(lu) / (1.0 - rho)
    if not table_done:
        return math.inf
    if math.isnan(pt):
        return math.inf
    a_N = seq.values[N - 1]
    extra = (beta - mu * alpha) * (math.log(a_N) - pt * math.log(N))
    if az < 1.0:
        grow = max(1.0, (N + nu) / (N + 1.0))
        pw = max(1.0, ((N + 1.0) / N) ** (pt * beta))
        rho = az * grow * pw
        if rho >= 1.0:
            return math.inf
        return last_mag * rho / (1.0 - rho)
    return _poly_tail_integral(pt, alpha, beta, mu, nu, N, extra_log=extra)


# ---------------------------------------------------------------------------
# direct block-doubling driver


def _direct_sum(alpha, beta, mu, nu, r, z, seq, tol, method="series"):
    kern = kernels()
    az = abs(z)
    log_abs_z = 0.0 if az >= 1.0 else math.log(az)
    z_negative = z < 0
    log_r2 = math.log(r * r) if r > 0 else -math.inf
    table_len = len(seq.values) if isinstance(seq, ExplicitTable) else None

    total = 0.0
    comp = 0.0
    abssum = 0.0
    round_err = 0.0
    n0 = 1
    block = 64
    while True:
        if table_len is not None:
            block = min(block, table_len - n0 + 1)
        la = _log_a_block(seq, n0, block)
        t = kern.series_term_block(la, n0, float(alpha), float(beta), float(mu),
                                   float(nu), log_abs_z, z_negative, log_r2)
        bs = math.fsum(t)
        y = total + bs
        comp += (total - y) + bs if abs(total) >= abs(bs) else (bs - y) + total
        total = y
        babs = float(np.sum(np.abs(t)))
        abssum += babs
        N = n0 + block - 1
        scale = (1.0 + mu * alpha) * max(float(np.max(np.abs(la))),
                                         math.lgamma(N + nu + 2.0))
        round_err += babs * 4.0 * _EPS * max(4.0, scale)
        last_mag = float(abs(t[-1]))
        table_done = table_len is not None and N >= table_len
        tail = _tail_bound(seq, alpha, beta, mu, nu, r, z, N, last_mag, table_done)
        if last_mag < tol and tail < tol:
            value = total + comp
            bound = tail + round_err + 2.0 * _EPS * abs(value)
            return EvalResult(value, bound, N, method)
        if table_done:
            raise ToleranceNotReachedError(
                f"explicit table exhausted after {N} entries before certifying "
                f"tol={tol} (tail bound {tail:.3g})", partial=(total + comp, tail))
        if N >= _MAX_DIRECT_TERMS:
            raise ToleranceNotReachedError(
                f"term budget {_MAX_DIRECT_TERMS} exhausted before certifying "
                f"tol={tol} (tail bound {tail:.3g})", partial=(total + comp, tail))
        n0 = N + 1
        block = min(2 * block, 1 << 20)


# ---------------------------------------------------------------------------
# exact zeta-tail rearrangement (PowerOfIndex, |z| = 1, integer nu)


def _binom_weight_poly(nu_i: int):
    """Coefficients c_k with (nu)_n/n! = sum_k c_k n^k (integer nu >= 1)."""
    coeffs = [1.0]
    for i in range(1, nu_i):
        new = [0.0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] += c
            new[k] += c * i
        coeffs = new
    f = float(math.factorial(nu_i - 1))
    return [c / f for c in coeffs]


def _fast_power_unit_z(alpha, beta, mu, nu_i, r, z, gam, tol):
    """Head terms plus binomial expansion of (n^B + r^2)^-mu into certified
    Euler-Maclaurin zeta tails.  Valid for a_n = n^gam, z = +-1, integer nu."""
    kern = kernels()
    if r * r == 0.0:  # r below sqrt underflow contributes nothing past j = 0
        r = 0.0
    B = gam * alpha
    n0 = max(16, int(math.ceil((2.0 * r * r) ** (1.0 / B))) + 1)
    la = _log_a_block(PowerOfIndex(gam), 1, n0 - 1)
    log_r2 = math.log(r * r) if r > 0 else -math.inf
    t = kern.series_term_block(la, 1, float(alpha), float(beta), float(mu),
                               float(nu_i), 0.0, z < 0, log_r2)
    head = math.fsum(t)
    habs = float(np.sum(np.abs(t)))
    err = habs * 8.0 * _EPS

    coeffs = _binom_weight_poly(nu_i)
    lnr = math.log(r) if r > 0 else -math.inf
    parts = [head]
    j = 0
    tail = math.inf
    while True:
        s_base = B * (mu + j) - gam * beta
        inner = 0.0
        inner_abs = 0.0
        for k, ck in enumerate(coeffs):
            if ck == 0.0:
                continue
            s = s_base - k
            zt, ze = specfun._zeta_tail_from(s, n0)
            if z < 0:
                at, ae = specfun._alternating_zeta_tail_from(s, n0)
                inner += ck * at
                err += abs(ck) * ae
            else:
                inner += ck * zt
                err += abs(ck) * ze
            inner_abs += abs(ck) * zt
        lb = math.lgamma(mu + j) - math.lgamma(mu) - math.lgamma(j + 1.0)
        lmag = lb + 2.0 * j * lnr if r > 0 else (0.0 if j == 0 else -math.inf)
        sign = -1.0 if (j & 1) else 1.0
        if inner != 0.0 and lmag + math.log(max(abs(inner), 5e-324)) > -745.0:
            parts.append(2.0 * sign * math.exp(lmag + math.log(abs(inner)))
                         * math.copysign(1.0, inner))
        # certified outer tail: inner_abs shrinks at least by n0^-B per step
        rho = max(1.0, (mu + j + 1.0) / (j + 2.0)) * r * r * n0 ** (-B)
        if rho < 0.8:
            la_next = (math.lgamma(mu + j + 1) - math.lgamma(mu) - math.lgamma(j + 2.0)
                       + 2.0 * (j + 1) * lnr) if r > 0 else -math.inf
            nxt = 2.0 * math.exp(la_next) * inner_abs * n0 ** (-B) if r > 0 else 0.0
            tail = nxt / (1.0 - rho)
            if tail < tol * 0.5:
                break
        j += 1
        if j > 500:
            raise ToleranceNotReachedError(
                f"zeta-tail route did not certify tol={tol} within 500 binomial terms")
    value = math.fsum(parts)
    bound = tail + err + 4.0 * _EPS * abs(value)
    return EvalResult(value, bound, n0 - 1 + (j + 1), "series-zeta")


# ---------------------------------------------------------------------------
# shared entry point (also used by quadrature with beta outside [0, inf))


def _power_series_sum(alpha, beta, mu, nu, r, z, seq, tol, method="series"):
    if z == 0.0:
        return EvalResult(0.0, 0.0, 0, method)
    if isinstance(seq, PowerOfIndex) and abs(z) == 1.0:
        nu_round = round(nu)
        p = seq.gamma * (mu * alpha - beta) - nu + 1.0
        if p <= 1.0:
            raise ConvergenceError(
                f"series diverges at |z| = 1: guard gamma*(mu*alpha - beta) > nu fails")
        big = 2.0 * (1.0 + 1.0 / math.gamma(nu))
        est = (big / ((p - 1.0) * tol)) ** (1.0 / (p - 1.0))
        if est > _FASTPATH_MIN_TERMS:
            if abs(nu - nu_round) < 1e-12 and 1 <= nu_round <= 40:
                return dataclasses.replace(
                    _fast_power_unit_z(alpha, beta, mu, int(nu_round), r, z,
                                       seq.gamma, tol),
                    method=method + "-zeta")
            if est > _MAX_DIRECT_TERMS:
                raise ToleranceNotReachedError(
                    f"direct summation needs about {est:.2g} terms for tol={tol} "
                    f"(decay exponent {p:.3g}); no exact rearrangement exists for "
                    f"non-integer nu={nu}")
    return _direct_sum(alpha, beta, mu, nu, r, z, seq, tol, method=method)


# ---------------------------------------------------------------------------
# public evaluators


def eval_series(params: SeriesParams, seq: SequenceSpec, tol: float = 1e-10) -> EvalResult:
    """Evaluate the series with a certified absolute error bound <= tol."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    _require_convergent(params, seq)
    return _power_series_sum(params.alpha, params.beta, params.mu, params.nu,
                             params.r, params.z, seq, tol)


def eval_S(r: float, tol: float = 1e-10) -> EvalResult:
    """Classical Mathieu sum S(r) = sum 2n/(n^2+r^2)^2, r > 0."""
    if not r > 0:
        raise DomainError("eval_S requires r > 0")
    return eval_series(SeriesParams(2.0, 1.0, 2.0, 1.0, float(r), 1.0),
                       PowerOfIndex(1.0), tol)


def eval_S_mu(mu: float, r: float, tol: float = 1e-10) -> EvalResult:
    """Fractional-power variant sum 2n/(n^2+r^2)^mu, mu > 1, r >= 0."""
    if not mu > 1:
        raise ConvergenceError("eval_S_mu diverges: guard mu > 1 fails")
    if r < 0:
        raise DomainError("eval_S_mu requires r >= 0")
    return eval_series(SeriesParams(2.0, 1.0, float(mu), 1.0, float(r), 1.0),
                       PowerOfIndex(1.0), tol)


def eval_S_tilde(params: SeriesParams, seq: SequenceSpec, tol: float = 1e-10) -> EvalResult:
    """The alternating specialization: the same series at z = -1."""
    return eval_series(dataclasses.replace(params, z=-1.0), seq, tol)


def eval_via_mittag_leffler(params: SeriesParams, seq: GammaArithmetic,
                            m_max: int = 60, tol: float = 1e-10) -> EvalResult:
    """Evaluate the Gamma-sequence series through its Mittag-Leffler form:

        S = 2 sum_m ((mu)_m/m!) (-r^2)^m [E^(nu)_{B_m, gamma, delta}(z) - Gamma(delta)^-B_m]

    with B_m = (mu+m)*alpha - beta.  The bracket is summed from k = 1
    directly, which subtracts the k = 0 term without cancellation.  The
    outer binomial series converges for r^2 below min_n a_n^alpha.
    """
    if not isinstance(seq, GammaArithmetic):
        raise DomainError("the Mittag-Leffler route needs a GammaArithmetic sequence")
    if not (-1.0 < params.z <= 1.0):
        raise DomainError("the Mittag-Leffler route needs z in (-1, 1]")
    _require_convergent(params, seq)
    alpha, beta, mu, nu, r, z = (params.alpha, params.beta, params.mu,
                                 params.nu, params.r, params.z)
    if z == 0.0:
        return EvalResult(0.0, 0.0, 0, "mittag-leffler")
    a_min = min(math.gamma(seq.gamma * n + seq.delta) for n in range(1, 60))
    if not r * r < a_min ** alpha:
        raise ConvergenceError(
            f"outer binomial series diverges: guard r^2 < (min_n a_n)^alpha fails "
            f"({r * r:g} >= {a_min ** alpha:g})")

    parts = []
    err = 0.0
    coef = 2.0  # 2 * (mu)_m/m! * r^(2m), tracked iteratively
    rho_geo = r * r / a_min ** alpha
    tail = math.inf
    bad_ratio_streak = 0
    prev_mag = math.inf
    terms = 0
    for m in range(m_max):
        B_m = (mu + m) * alpha - beta
        mlp = specfun.MittagLefflerParams(beta=B_m, nu=seq.gamma, gamma=seq.delta, tau=nu)
        br = specfun._ml_sum(mlp, z, tol * 1e-3 / (1.0 + coef), 1)
        br_abs = br.value if z > 0 else specfun._ml_sum(mlp, abs(z), 1e-16, 1).value
        term = coef * ((-1.0) ** m) * br.value
        parts.append(term)
        err += coef * br.abs_error_bound
        terms += br.terms_used
        mag = abs(term)
        if mag >= prev_mag and mag > 0:
            bad_ratio_streak += 1
            if bad_ratio_streak >= 6:
                raise ConvergenceError(
                    "outer Mittag-Leffler series is not converging "
                    "(term ratio >= 1 sustained)")
        else:
            bad_ratio_streak = 0
        prev_mag = mag if mag > 0 else prev_mag
        rho = max(1.0, (mu + m + 1.0) / (m + 2.0)) * rho_geo
        coef *= (mu + m) / (m + 1.0) * r * r
        if rho < 1.0:
            # next-term bound: coef already advanced to m+1; bracket shrinks by >= a_min^-alpha
            tail = coef * abs(br_abs) * a_min ** (-alpha) / (1.0 - rho)
            if tail < tol * 0.5 and mag < tol:
                break
        if coef == 0.0:  # r == 0: the m = 0 term is the whole sum
            tail = 0.0
            break
    if not math.isfinite(tail):
        raise ConvergenceError(
            "outer Mittag-Leffler series tail could not be certified "
            "(term ratio >= 1)")
    value = math.fsum(parts)
    return EvalResult(value, tail + err + 4.0 * _EPS * abs(value), terms, "mittag-leffler")


def _ml_route_shifted(params: SeriesParams, seq: GammaArithmetic,
                      m_max: int = 60, tol: float = 1e-10) -> EvalResult:
    """Pochhammer-free variant for nu = 1: S = 2z sum_m ((mu)_m/m!) (-r^2)^m
    E_{B_m, gamma, gamma+delta}(z), absorbing the n -> n+1 shift into the
    Gamma offset.  Used to cross-check eval_via_mittag_leffler."""
    if params.nu != 1.0:
        raise DomainError("the shifted Mittag-Leffler form requires nu = 1")
    _require_convergent(params, seq)
    alpha, beta, mu, r, z = params.alpha, params.beta, params.mu, params.r, params.z
    if z == 0.0:
        return EvalResult(0.0, 0.0, 0, "mittag-leffler-shifted")
    a_min = min(math.gamma(seq.gamma * n + seq.delta) for n in range(1, 60))
    if not r * r < a_min ** alpha:
        raise ConvergenceError("outer binomial series diverges")
    parts = []
    err = 0.0
    coef = 2.0 * z
    terms = 0
    for m in range(m_max):
        B_m = (mu + m) * alpha - beta
        mlp = specfun.MittagLefflerParams(beta=B_m, nu=seq.gamma,
                                          gamma=seq.gamma + seq.delta, tau=1.0)
        br = specfun._ml_sum(mlp, z, tol * 1e-3 / (1.0 + abs(coef)), 0)
        parts.append(coef * ((-1.0) ** m) * br.value)
        err += abs(coef) * br.abs_error_bound
        terms += br.terms_used
        coef *= (mu + m) / (m + 1.0) * r * r
        if coef == 0.0:
            break
    value = math.fsum(parts)
    a1 = math.gamma(seq.gamma + seq.delta)
    rho = max(1.0, (mu + m_max) / (m_max + 1.0)) * r * r / a_min ** alpha
    tail = abs(coef) / (a1 ** B_m * max(1e-300, 1.0 - rho)) if rho < 1 else math.inf
    if not math.isfinite(tail):
        raise ConvergenceError("outer series tail could not be certified")
    return EvalResult(value, tail + err, terms, "mittag-leffler-shifted")


def eval_phi_star_difference(nu: float, r: float, z: float,
                             tol: float = 1e-10) -> EvalResult:
    """The (alpha, beta, mu) = (2, 1, 2) series via the complex shift identity

        S = [Phi*_nu(z, 2, -ir) - Phi*_nu(z, 2, ir)] / (2 i r),

    valid for |z| < 1.  The two conjugate evaluations are performed
    independently; their imaginary parts must cancel, and a residual above
    tolerance is reported as a precision failure in the transcendent."""
    if not r > 0:
        raise DomainError("phi-star difference requires r > 0")
    if not abs(z) < 1:
        raise DomainError("phi-star difference requires |z| < 1")
    if not nu > 0:
        raise DomainError("phi-star difference requires nu > 0")
    if z == 0.0:
        return EvalResult(0.0, 0.0, 0, "phi-star")
    sub_tol = tol * min(0.25, r * 0.5)
    res_p = specfun._phi_star_result(z, 2.0, 1j * r, nu, sub_tol)
    res_m = specfun._phi_star_result(z, 2.0, -1j * r, nu, sub_tol)
    # the conjugate-shift identity: 2n/(n^2+r^2)^2 = [(n-ir)^-2 - (n+ir)^-2]/(2ir),
    # so the -ir evaluation enters with the plus sign
    val = (res_m.value - res_p.value) / (2j * r)
    bound = (res_p.abs_error_bound + res_m.abs_error_bound) / (2.0 * r) \
        + 8.0 * _EPS * abs(val)
    resid = abs(val.imag)
    if resid > max(tol, 8.0 * bound):
        from .errors import PrecisionLossError
        raise PrecisionLossError(
            f"phi-star difference left an imaginary residual {resid:.3g} "
            f"above tolerance {tol:g}; the transcendent lost precision")
    return EvalResult(val.real, bound + resid,
                      res_p.terms_used + res_m.terms_used, "phi-star")
