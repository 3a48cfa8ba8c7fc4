"""Scalar special functions consumed by the rest of the package.

Gamma-family helpers, Riemann zeta (Euler-Maclaurin corrected), the
Pochhammer-weighted Hurwitz-Lerch transcendent, the Fox-Wright function
with one upper and one lower parameter pair, generalized hypergeometric
series, Bessel J of real order >= -1/2, and a four-parameter family of
Mittag-Leffler type functions.

Every series here uses a two-part stopping rule: the current term must be
below tolerance AND an explicit majorant (geometric ratio or integral
test) must certify the remainder.  Alternating sums additionally report
the cancellation they suffered through their error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, gammasgn

from ._backend import kernels
from .errors import ConvergenceError, DomainError, PrecisionLossError, ToleranceNotReachedError
from .result import EvalResult

_EPS = 2.220446049250313e-16
_LOG_DBL_MAX = math.log(1.7976931348623157e308)

# B_{2k} for k = 1..12
_BERNOULLI = (
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
    -174611.0 / 330.0, 854513.0 / 138.0, -236364091.0 / 2730.0,
)


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class FoxWright11Params:
    """Parameters (a, A; b, B) of the series sum_n Gamma(a+nA)/Gamma(b+nB) x^n/n!."""

    a: float
    A: float
    b: float
    B: float

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0):
            raise DomainError("Fox-Wright steps must satisfy A > 0 and B > 0")
        if not (1.0 + self.B - self.A > 0):
            raise DomainError("Fox-Wright convergence requires 1 + B - A > 0")


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters of pFq with p <= q (entire in the argument)."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(float(v) for v in self.numerator))
        object.__setattr__(self, "denominator", tuple(float(v) for v in self.denominator))
        if len(self.numerator) > len(self.denominator):
            raise DomainError("need p <= q for an everywhere-convergent pFq")
        for d in self.denominator:
            if d <= 0 and abs(d - round(d)) < 1e-12:
                raise DomainError(f"denominator parameter {d} is a non-positive integer")


def delta_array(q: int, lam: float) -> tuple:
    """The q-point arithmetic array lam/q, (lam+1)/q, ..., (lam+q-1)/q."""
    if q < 1:
        raise DomainError("q must be a positive integer")
    return tuple((lam + i) / q for i in range(q))


@dataclass(frozen=True)
class MittagLefflerParams:
    """Parameters of sum_k (tau)_k x^k / (k! Gamma(nu*k+gamma)^beta)."""

    beta: float
    nu: float
    gamma: float
    tau: float

    def __post_init__(self):
        if min(self.beta, self.nu, self.gamma, self.tau) <= 0:
            raise DomainError("all Mittag-Leffler parameters must be positive")


# ---------------------------------------------------------------------------
# gamma family


def pochhammer(nu: float, n: int) -> float:
    """Rising factorial (nu)_n = nu (nu+1) ... (nu+n-1), with (nu)_0 = 1.

    Large n switches to log-space accumulation with a separately tracked
    sign; a result beyond float range raises DomainError rather than
    returning infinity.
    """
    if n != int(n) or n < 0:
        raise DomainError("pochhammer order n must be a nonnegative integer")
    n = int(n)
    if n == 0:
        return 1.0
    if n <= 4096:
        acc = 1.0
        for k in range(n):
            acc *= nu + k
            if math.isinf(acc):
                raise DomainError(f"({nu})_{n} overflows the float range")
        return acc
    logmag = 0.0
    sign = 1.0
    for k in range(n):
        f = nu + k
        if f == 0.0:
            return 0.0
        if f < 0.0:
            sign = -sign
        logmag += math.log(abs(f))
    if logmag > _LOG_DBL_MAX:
        raise DomainError(f"({nu})_{n} overflows the float range")
    return sign * math.exp(logmag)


def _zeta_tail_from(s: float, a: int):
    """(sum_{n>=a} n^-s, certified bound on its error), via Euler-Maclaurin."""
    la = math.log(a)
    if s * la > 760.0:
        return 0.0, math.exp(-(s - 1.0) * la) / (s - 1.0) if (s - 1.0) * la < 745 else 5e-324
    total = math.exp((1.0 - s) * la) / (s - 1.0) + 0.5 * math.exp(-s * la)
    logpoch = 0.0
    omitted = 0.0
    for k, b2k in enumerate(_BERNOULLI, start=1):
        # (s)_{2k-1} accumulated in log space
        if k == 1:
            logpoch = math.log(s)
        else:
            logpoch += math.log(s + 2 * k - 3) + math.log(s + 2 * k - 2)
        logterm = math.log(abs(b2k)) - math.lgamma(2 * k + 1) + logpoch - (s + 2 * k - 1) * la
        if logterm < -745.0:
            omitted = 0.0
            break
        term = math.copysign(math.exp(logterm), b2k)
        total += term
        omitted = abs(term)
    return total, 2.0 * omitted + 4.0 * _EPS * abs(total)


@lru_cache(maxsize=512)
def riemann_zeta(p: float) -> float:
    """zeta(p) = sum n^-p for p > 1, absolute error below 1e-14."""
    p = float(p)
    if not p > 1.0:
        raise DomainError("riemann_zeta requires p > 1")
    if p > 54.0:
        return 1.0 + 2.0 ** -p + 3.0 ** -p
    a = 24
    head = math.fsum(n ** -p for n in range(1, a))
    tail, _ = _zeta_tail_from(p, a)
    return head + tail


def _alternating_zeta_tail_from(s: float, a: int):
    """(sum_{n>=a} (-1)^n n^-s, error bound)."""
    e0 = a if a % 2 == 0 else a + 1
    even, err1 = _zeta_tail_from(s, e0 // 2)
    even *= 2.0 ** -s
    err1 *= 2.0 ** -s
    full, err2 = _zeta_tail_from(s, a)
    return 2.0 * even - full, 2.0 * err1 + err2


# ---------------------------------------------------------------------------
# Hurwitz-Lerch transcendent with Pochhammer weight


def _is_nonpositive_integer(a: complex) -> bool:
    return a.imag == 0.0 and a.real <= 0.0 and abs(a.real - round(a.real)) < 1e-12


def _phi_star_result(z, s, a, nu, tol=1e-13) -> EvalResult:
    z = complex(z)
    a = complex(a)
    s = float(s)
    nu = float(nu)
    if nu <= 0:
        raise DomainError("phi-star weight nu must be positive")
    if _is_nonpositive_integer(a):
        raise DomainError("phi-star shift a must not be a non-positive integer")
    az = abs(z)
    if az > 1.0 + 1e-15:
        raise DomainError("phi-star requires |z| <= 1")
    on_circle = az > 1.0 - 1e-15
    if on_circle and not (s - nu > 1.0):
        raise ConvergenceError(
            f"phi-star diverges: |z| = 1 requires s - nu > 1, got s - nu = {s - nu}")
    if z == 0:
        return EvalResult(a ** -s, _EPS * abs(a ** -s), 1, "phi-star")

    real_z = z.imag == 0.0
    log_az = math.log(az)
    aa = abs(a)
    re_parts = []
    im_parts = []
    abssum = 0.0
    lognu = math.lgamma(nu)
    block = 64
    n0 = 0
    max_terms = 2_000_000
    while True:
        n = np.arange(n0, n0 + block, dtype=np.float64)
        logw = gammaln(nu + n) - lognu - gammaln(n + 1.0)
        w = np.exp(logw)
        if real_z:
            zn = np.exp(n * log_az)
            if z.real < 0:
                zn = np.where((np.arange(n0, n0 + block) & 1) == 1, -zn, zn)
            zn = zn.astype(np.complex128)
        else:
            zn = np.exp(n * np.log(z))
        t = w * zn * np.exp(-s * np.log(n + a))
        re_parts.extend(t.real.tolist())
        im_parts.extend(t.imag.tolist())
        abssum += float(np.sum(np.abs(t)))
        n_last = n0 + block - 1
        last_mag = float(abs(t[-1]))
        tail = _phi_star_tail(az, s, nu, aa, n_last, last_mag, on_circle)
        if last_mag < tol and tail < tol:
            value = complex(math.fsum(re_parts), math.fsum(im_parts))
            bound = tail + 8.0 * _EPS * abssum
            return EvalResult(value, bound, n_last + 1, "phi-star")
        n0 += block
        block = min(2 * block, 1 << 16)
        if n0 > max_terms:
            raise ToleranceNotReachedError(
                f"phi-star did not certify tol={tol} within {max_terms} terms")


def _phi_star_tail(az, s, nu, aa, n_last, last_mag, on_circle):
    """Certified bound on sum_{n>n_last} |(nu)_n z^n / (n! (n+a)^s)|."""
    if n_last < 2 * aa + 4:
        return math.inf
    if not on_circle:
        grow = max(1.0, (n_last + nu) / (n_last + 1))
        shift = ((n_last + 1 + aa) / (n_last - aa)) ** abs(s)
        rho = az * grow * shift
        if rho >= 1.0:
            return math.inf
        return last_mag * rho / (1.0 - rho)
    # |z| = 1: integral test on C n^{nu-1-s}; s - nu > 1 guaranteed by guard
    g = math.exp(math.lgamma(nu + n_last) - math.lgamma(nu) - math.lgamma(n_last + 1.0)
                 + (1.0 - nu) * math.log(n_last))
    big = max(g, 1.0 / math.gamma(nu)) * (2.0 ** max(s, 0.0))
    p = s - nu + 1.0
    return big * n_last ** (1.0 - p) / (p - 1.0)


def hurwitz_lerch_phi_star(z, s, a, nu, tol=1e-13) -> complex:
    """Phi*_nu(z, s, a) = sum_{n>=0} (nu)_n z^n / (n! (n+a)^s)."""
    return _phi_star_result(z, s, a, nu, tol).value


# ---------------------------------------------------------------------------
# Fox-Wright 1Psi1


def _fox_wright_11_result(params: FoxWright11Params, x: float, tol=1e-13) -> EvalResult:
    a, A, b, B = params.a, params.A, params.b, params.B
    x = float(x)
    sgn_x = -1.0 if x < 0 else 1.0
    log_ax = math.log(abs(x)) if x != 0.0 else -math.inf
    parts = []
    runmax = 0.0
    nterms = 0
    n = 0
    while True:
        ya = a + n * A
        yb = b + n * B
        sg_den = gammasgn(yb)
        if gammasgn(ya) == 0.0 or (ya <= 0 and abs(ya - round(ya)) < 1e-12):
            raise DomainError(f"Fox-Wright upper gamma hits a pole at n={n} (a+nA={ya})")
        if sg_den == 0.0:
            term = 0.0
        else:
            logc = math.lgamma(ya) - math.lgamma(yb) - math.lgamma(n + 1.0)
            logt = logc + (n * log_ax if n else 0.0)
            term = gammasgn(ya) * sg_den * (sgn_x ** n) * math.exp(logt)
        parts.append(term)
        runmax = max(runmax, abs(term))
        nterms += 1
        if n >= 2 and abs(term) < tol * max(1.0, runmax * 1e-3):
            rho = _fw_ratio_bound(a, A, b, B, abs(x), n)
            rho2 = _fw_ratio_bound(a, A, b, B, abs(x), n + 1)
            if rho < 1.0 and rho2 <= rho:
                tail = abs(term) * rho / (1.0 - rho)
                if tail < tol:
                    break
        n += 1
        if n > 200_000:
            raise ToleranceNotReachedError(
                f"Fox-Wright series did not certify tol={tol} within {n} terms")
    value = math.fsum(parts)
    cancel = runmax / max(abs(value), 5e-324)
    if cancel > 1e12:
        raise PrecisionLossError(
            f"Fox-Wright sum at x={x} lost all significant digits "
            f"(cancellation ratio {cancel:.2e})")
    bound = tail + _EPS * runmax * nterms
    return EvalResult(value, bound, nterms, "fox-wright-11")


def _fw_ratio_bound(a, A, b, B, ax, n):
    """Upper bound on |t_{n+1}/t_n| for the 1Psi1 series, valid for all m >= n."""
    ya = a + (n + 1) * A
    yb = b + n * B
    if ya <= 0 or yb <= 0.5:
        return math.inf
    return ax * ya ** A / ((yb - 0.5) ** B * (n + 1))


def fox_wright_11(params: FoxWright11Params, x: float, tol=1e-13) -> float:
    """1Psi1[(a,A);(b,B); x] = sum_n Gamma(a+nA)/Gamma(b+nB) x^n/n!."""
    return _fox_wright_11_result(params, x, tol).value


# ---------------------------------------------------------------------------
# generalized hypergeometric pFq (p <= q)


def _pfq_result(params: HypergeometricParams, x: float, tol=1e-13) -> EvalResult:
    num = params.numerator
    den = params.denominator
    x = float(x)
    term = 1.0
    parts = [1.0]
    runmax = 1.0
    n = 0
    tail = 0.0
    while True:
        ratio = x / (n + 1.0)
        for c in num:
            ratio *= c + n
        for c in den:
            ratio /= c + n
        term *= ratio
        if term == 0.0:  # terminating (polynomial) case
            tail = 0.0
            break
        parts.append(term)
        runmax = max(runmax, abs(term))
        n += 1
        if n >= 2 and abs(term) < tol * max(1.0, runmax * 1e-3):
            r1 = _pfq_ratio(num, den, abs(x), n)
            r2 = _pfq_ratio(num, den, abs(x), n + 1)
            if r1 < 1.0 and r2 <= r1:
                tail = abs(term) * r1 / (1.0 - r1)
                if tail < tol:
                    break
        if n > 200_000:
            raise ToleranceNotReachedError(
                f"pFq series did not certify tol={tol} within {n} terms")
    value = math.fsum(parts)
    cancel = runmax / max(abs(value), 5e-324)
    if cancel > 1e12:
        raise PrecisionLossError(
            f"pFq sum at x={x} lost all significant digits (cancellation {cancel:.2e})")
    return EvalResult(value, tail + _EPS * runmax * len(parts), len(parts), "pfq")


def _pfq_ratio(num, den, ax, n):
    r = ax / (n + 1.0)
    for c in num:
        r *= abs(c + n)
    for c in den:
        d = c + n
        if d <= 0:
            return math.inf
        r /= d
    return r


def hypergeometric_pfq(params: HypergeometricParams, x: float, tol=1e-13) -> float:
    """pFq(numerator; denominator; x) for p <= q (entire in x)."""
    return _pfq_result(params, x, tol).value


# ---------------------------------------------------------------------------
# Bessel J


_BESSEL_CUTOFF = 12.0


def bessel_j_many(order: float, xs) -> np.ndarray:
    """J_order over an array of nonnegative x (series below the cutoff,
    Hankel asymptotics above; the asymptotic series terminates exactly for
    half-integer orders)."""
    if order < -0.5:
        raise DomainError("bessel_j requires order >= -1/2")
    xs = np.asarray(xs, dtype=np.float64)
    if np.any(xs < 0):
        raise DomainError("bessel_j requires x >= 0")
    kern = kernels()
    out = np.empty_like(xs)
    small = xs <= _BESSEL_CUTOFF
    if np.any(small):
        out[small] = kern.bessel_j_series(float(order), np.ascontiguousarray(xs[small]))
    if np.any(~small):
        out[~small] = kern.bessel_j_asym(float(order), np.ascontiguousarray(xs[~small]))
    return out


def bessel_j(order: float, x: float) -> float:
    """Bessel function of the first kind, real order >= -1/2, x >= 0."""
    return float(bessel_j_many(order, np.array([float(x)]))[0])


# ---------------------------------------------------------------------------
# Mittag-Leffler family


def _ml_sum(params: MittagLefflerParams, x: float, tol: float, k0: int) -> EvalResult:
    beta, nu, gam, tau = params.beta, params.nu, params.gamma, params.tau
    x = float(x)
    if x == 0.0:
        if k0 == 0:
            v = math.exp(-beta * math.lgamma(gam))
            return EvalResult(v, _EPS * v, 1, "mittag-leffler")
        return EvalResult(0.0, 0.0, 0, "mittag-leffler")
    sgn_x = -1.0 if x < 0 else 1.0
    log_ax = math.log(abs(x))
    lgt = math.lgamma(tau)
    parts = []
    runmax = 0.0
    k = k0
    while True:
        logc = (math.lgamma(tau + k) - lgt - math.lgamma(k + 1.0)
                - beta * math.lgamma(nu * k + gam))
        term = (sgn_x ** k) * math.exp(logc + k * log_ax)
        parts.append(term)
        runmax = max(runmax, abs(term))
        if k >= k0 + 2 and abs(term) < tol:
            step = math.lgamma(nu * (k + 1) + gam) - math.lgamma(nu * k + gam)
            rho = abs(x) * max(1.0, (tau + k) / (k + 1.0)) * math.exp(-beta * step)
            if rho < 1.0:
                tail = abs(term) * rho / (1.0 - rho)
                if tail < tol:
                    break
        k += 1
        if k - k0 > 100_000:
            raise ToleranceNotReachedError(
                f"Mittag-Leffler series did not certify tol={tol}")
    value = math.fsum(parts)
    return EvalResult(value, tail + _EPS * runmax * len(parts), len(parts), "mittag-leffler")


def mittag_leffler(params: MittagLefflerParams, x: float, tol=1e-13) -> float:
    """sum_{k>=0} (tau)_k x^k / (k! Gamma(nu*k+gamma)^beta)."""
    return _ml_sum(params, x, tol, 0).value


def mittag_leffler_tail_from_k1(params: MittagLefflerParams, x: float, tol=1e-13) -> EvalResult:
    """Same series with the k = 0 term removed (avoids cancellation when the
    caller would subtract Gamma(gamma)^-beta explicitly)."""
    return _ml_sum(params, x, tol, 1)
