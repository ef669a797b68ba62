"""Khinchin families: the tilted probability laws attached to a power series.

A power series f with non-negative coefficients and f(0) > 0 induces, for
each radius t inside the disk of convergence, the law P(X_t = n) = a_n t^n
/ f(t). This module holds the family container plus the probabilistic
operations on it: mass, moments, characteristic function, fulcrum
derivatives, Chernoff bounds and the structural diagnostics.

Evaluation is organized around logs: a family must know ln f(t) (and
optionally ln f(z) for complex z); means and variances are the first two
derivatives of the fulcrum s -> ln f(e^s), i.e. the first two cumulants of
X_t, and higher derivatives of f are reconstructed from cumulants when a
closed form is not provided.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import series as se
from .errors import (
    ComplexEvalUnavailable,
    DerivativeOrderUnavailable,
    NoCoefficientAccess,
    NotEntire,
    RadiusOutOfRange,
    ZeroMean,
)
from .numerics import (
    LogNumber,
    finite_diff_richardson,
    log_of_fraction,
    second_diff_richardson,
)

# Maximum-term comparison constant from the Chebyshev argument:
# f(t) <= (1/H) * mu(f, t) * (1 + sigma_f(t)) with H = 1/(4*sqrt(2)).
MAX_TERM_H = 1.0 / (4.0 * math.sqrt(2.0))


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    row = [1] + [0] * n
    for m in range(1, n + 1):
        new = [0] * (n + 1)
        for j in range(1, m + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


@dataclass(frozen=True)
class Family:
    """An evaluable generating function together with its family data.

    ``log_value`` is ln f(t) on (0, radius); ``mean`` and ``variance`` are
    m_f and sigma_f^2. ``fulcrum34``, when given, returns the third and
    fourth fulcrum derivatives at s = ln t (the third and fourth cumulants
    of X_t); otherwise they are obtained by finite differences of the
    variance. ``log_value_complex`` is any branch of log f(z); only
    exp(log f(z) - log f(t)) is ever consumed, which is branch-free.
    """

    name: str
    radius: float
    mean_sup: float
    log_value: Callable[[float], float]
    mean: Callable[[float], float]
    variance: Callable[[float], float]
    log_value_complex: Callable[[complex], complex] | None = None
    coeffs: se.CoeffSeries | None = None
    q_gcd: int = 1
    usg: bool = False
    fulcrum34: Callable[[float], tuple[float, float]] | None = None
    boundary_variance: float | None = None
    spec_key: str | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def check_radius(self, t: float) -> None:
        if t <= 0:
            raise RadiusOutOfRange(f"t={t} must be positive")
        if t > self.radius:
            raise RadiusOutOfRange(f"t={t} outside radius {self.radius}")
        if t == self.radius and math.isinf(self.mean_sup):
            raise RadiusOutOfRange(f"t={t} on the boundary needs a finite mean limit")


@dataclass(frozen=True)
class KhinchinPoint:
    t: float
    f_t: float
    m_t: float
    var_t: float


def point(fam: Family, t: float) -> KhinchinPoint:
    fam.check_radius(t)
    return KhinchinPoint(t, math.exp(fam.log_value(t)), fam.mean(t), fam.variance(t))


# -- mass and normalization ----------------------------------------------------


def log_mass(fam: Family, t: float, n: int) -> LogNumber:
    """P(X_t = n) as a LogNumber; requires coefficient access."""
    fam.check_radius(t)
    if fam.coeffs is None:
        raise NoCoefficientAccess(f"{fam.name} has no coefficient access")
    a_n = fam.coeffs.coeff(n)
    if a_n == 0:
        return LogNumber.zero()
    return LogNumber.from_log(log_of_fraction(a_n) + n * math.log(t) - fam.log_value(t))


def mass(fam: Family, t: float, n: int) -> float:
    if t == 0:  # degenerate point mass at zero
        return 1.0 if n == 0 else 0.0
    return log_mass(fam, t, n).to_float()


def mass_total(fam: Family, t: float, t_star: float | None = None) -> tuple[float, float]:
    """Sum of the truncated masses plus a certified tail bound.

    The tail uses the geometric majorant at a comparison radius t* > t:
    sum_{n>N} a_n t^n <= (t/t*)^{N+1} f(t*), so the reported pair satisfies
    total + tail >= 1 >= total.
    """
    fam.check_radius(t)
    if fam.coeffs is None:
        raise NoCoefficientAccess(f"{fam.name} has no coefficient access")
    if t_star is None:
        t_star = 2.0 * t if math.isinf(fam.radius) else 0.5 * (t + fam.radius)
    if not t < t_star < fam.radius:
        raise RadiusOutOfRange("comparison radius must satisfy t < t* < R")
    log_f = fam.log_value(t)
    log_t = math.log(t)
    total = math.fsum(
        math.exp(log_of_fraction(c) + n * log_t - log_f)
        for n, c in enumerate(fam.coeffs.coeffs)
        if c > 0
    )
    n_top = fam.coeffs.order
    log_tail = (n_top + 1) * (log_t - math.log(t_star)) + fam.log_value(t_star) - log_f
    tail = math.exp(log_tail) if log_tail < 700.0 else math.inf
    return total, tail


# -- moments -------------------------------------------------------------------


def _cumulants(fam: Family, t: float, order: int) -> list[float]:
    """Cumulants kappa_1..kappa_order of X_t (order <= 4)."""
    fam.check_radius(t)
    out = [fam.mean(t), fam.variance(t)]
    if order <= 2:
        return out[:order]
    s = math.log(t)
    if fam.fulcrum34 is not None:
        f3, f4 = fam.fulcrum34(s)
    else:
        h = 1e-4 * max(1.0, abs(s))

        def var_at(u: float) -> float:
            return fam.variance(math.exp(u))

        f3 = finite_diff_richardson(var_at, s, h)
        f4 = second_diff_richardson(var_at, s, h)
    out.extend([f3, f4])
    return out[:order]


def factorial_moment(fam: Family, t: float, j: int) -> float:
    """E[X_t (X_t - 1) ... (X_t - j + 1)] = t^j f^(j)(t) / f(t)."""
    if j < 0:
        raise ValueError("factorial moment order must be >= 0")
    if j == 0:
        return 1.0
    if j > 4:
        return _direct_moment_sum(fam, t, j, factorial=True)
    k = _cumulants(fam, t, min(j, 4))
    m1 = k[0]
    ex = [1.0, m1]
    if j >= 2:
        ex.append(k[1] + m1 * m1)
    if j >= 3:
        ex.append(k[2] + 3.0 * k[1] * m1 + m1**3)
    if j >= 4:
        ex.append(k[3] + 4.0 * k[2] * m1 + 3.0 * k[1] ** 2 + 6.0 * k[1] * m1 * m1 + m1**4)
    if j == 1:
        return ex[1]
    if j == 2:
        return ex[2] - ex[1]
    if j == 3:
        return ex[3] - 3.0 * ex[2] + 2.0 * ex[1]
    return ex[4] - 6.0 * ex[3] + 11.0 * ex[2] - 6.0 * ex[1]


def moment(fam: Family, t: float, k: int) -> float:
    """E[X_t^k] via Stirling numbers over factorial moments (k <= 4),
    falling back to direct coefficient sums for higher k."""
    if k < 1:
        raise ValueError("moment order must be >= 1")
    if k == 1:
        return fam.mean(t)
    if k > 4:
        return _direct_moment_sum(fam, t, k, factorial=False)
    return math.fsum(stirling2(k, j) * factorial_moment(fam, t, j) for j in range(1, k + 1))


def central_moment(fam: Family, t: float, k: int) -> float:
    if k < 1:
        raise ValueError("central moment order must be >= 1")
    if k == 1:
        return 0.0
    if k == 2:
        return fam.variance(t)
    if k <= 4:
        kappa = _cumulants(fam, t, k)
        if k == 3:
            return kappa[2]
        return kappa[3] + 3.0 * kappa[1] ** 2
    m = fam.mean(t)
    return _direct_weighted_sum(fam, t, lambda n: (n - m) ** k)


def _direct_moment_sum(fam: Family, t: float, k: int, factorial: bool) -> float:
    if fam.coeffs is None:
        raise DerivativeOrderUnavailable(
            f"order {k} needs coefficient access for {fam.name}"
        )

    if factorial:

        def w(n: float) -> float:
            acc = 1.0
            for i in range(k):
                acc *= n - i
            return acc

    else:

        def w(n: float) -> float:
            return n**k

    return _direct_weighted_sum(fam, t, w)


def _direct_weighted_sum(fam: Family, t: float, weight: Callable[[float], float]) -> float:
    if fam.coeffs is None:
        raise NoCoefficientAccess(f"{fam.name} has no coefficient access")
    fam.check_radius(t)
    log_f = fam.log_value(t)
    log_t = math.log(t)
    return math.fsum(
        weight(float(n)) * math.exp(log_of_fraction(c) + n * log_t - log_f)
        for n, c in enumerate(fam.coeffs.coeffs)
        if c > 0
    )


# -- characteristic and moment generating functions ----------------------------


def charfn(fam: Family, t: float, theta: float) -> complex:
    """E[e^{i theta X_t}] = f(t e^{i theta}) / f(t)."""
    fam.check_radius(t)
    if fam.log_value_complex is None:
        raise ComplexEvalUnavailable(f"{fam.name} has no complex evaluation")
    z = t * cmath.exp(1j * theta)
    return cmath.exp(fam.log_value_complex(z) - fam.log_value(t))


def normalized_charfn(fam: Family, t: float, theta: float) -> complex:
    """Characteristic function of (X_t - m) / sigma."""
    sigma = math.sqrt(fam.variance(t))
    m = fam.mean(t)
    return charfn(fam, t, theta / sigma) * cmath.exp(-1j * theta * m / sigma)


def mgf(fam: Family, t: float, lam: float) -> float:
    """E[e^{lam X_t}] = f(t e^lam) / f(t)."""
    fam.check_radius(t)
    t2 = t * math.exp(lam)
    if t2 >= fam.radius:
        raise RadiusOutOfRange(f"t*e^lambda = {t2} reaches the radius {fam.radius}")
    return math.exp(fam.log_value(t2) - fam.log_value(t))


def fulcrum_derivs(fam: Family, s: float, max_order: int = 4) -> tuple[float, ...]:
    """Derivatives F', F'', F''', F'''' of F(s) = ln f(e^s)."""
    if not 1 <= max_order <= 4:
        raise DerivativeOrderUnavailable("fulcrum derivatives available up to order 4")
    t = math.exp(s)
    if t >= fam.radius:
        raise RadiusOutOfRange(f"e^s = {t} outside radius {fam.radius}")
    return tuple(_cumulants(fam, t, max_order))


# -- Chernoff bounds -----------------------------------------------------------


def chernoff_sigma(fam: Family, t: float, lam_max: float, grid: int = 1024) -> float:
    """Sigma(s, Lambda) = 2 max_{0<|u|<=Lambda} (F'(s+u) - F'(s)) / u on a grid."""
    fam.check_radius(t)
    s = math.log(t)
    if t * math.exp(lam_max) >= fam.radius:
        raise RadiusOutOfRange("t*e^Lambda must stay inside the radius")
    m0 = fam.mean(t)
    best = 0.0
    for i in range(1, grid + 1):
        u = lam_max * i / grid
        for uu in (u, -u):
            val = (fam.mean(math.exp(s + uu)) - m0) / uu
            if val > best:
                best = val
    return 2.0 * best


def chernoff_bound(fam: Family, t: float, y: float, lam_max: float) -> float:
    """Two-sided tail bound P(|X_t - m| > y), capped at 1."""
    if y < 0:
        raise ValueError("deviation y must be >= 0")
    sig = chernoff_sigma(fam, t, lam_max)
    if y <= lam_max * sig:
        bound = 2.0 * math.exp(-y * y / (2.0 * sig))
    else:
        bound = 2.0 * math.exp(-lam_max * y / 2.0)
    return min(1.0, bound)


# -- structural diagnostics ----------------------------------------------------


def clan_ratio(fam: Family, t: float) -> float:
    """sigma_f(t) / m_f(t); small values signal concentration."""
    m = fam.mean(t)
    if m <= 0:
        raise ZeroMean(f"mean vanishes at t={t}")
    return math.sqrt(fam.variance(t)) / m


@dataclass(frozen=True)
class GapStats:
    window_gap: int
    tail_gap_estimate: int
    q_gcd: int
    provisional: bool


def gap_stats(fam: Family) -> GapStats:
    """Index-gap statistics over the truncated coefficient window.

    Both gaps are window statistics, hence lower estimates of the true
    sup/limsup; the q estimate is provisional when fewer than 8 nonzero
    coefficients are visible.
    """
    if fam.coeffs is None:
        raise NoCoefficientAccess(f"{fam.name} has no coefficient access")
    nz = fam.coeffs.nonzero_indices()
    if len(nz) < 2:
        return GapStats(0, 0, 1, True)
    gaps = [b - a for a, b in zip(nz, nz[1:])]
    half = len(gaps) // 2
    tail_gap = max(gaps[half:]) if gaps[half:] else max(gaps)
    return GapStats(max(gaps), tail_gap, se.support_gcd(fam.coeffs), len(nz) < 8)


def zero_free_halfwidth(fam: Family, t: float, verify_grid: int = 256) -> float:
    """Angular half-width pi / (2 sigma_f(t)) of the guaranteed zero-free sector."""
    fam.check_radius(t)
    hw = math.pi / (2.0 * math.sqrt(fam.variance(t)))
    if fam.log_value_complex is not None and verify_grid > 0:
        for i in range(verify_grid):
            theta = (i + 0.5) / verify_grid * min(hw, math.pi)
            for th in (theta, -theta):
                val = cmath.exp(
                    fam.log_value_complex(t * cmath.exp(1j * th)) - fam.log_value(t)
                )
                if val == 0:
                    raise AssertionError("zero found inside the guaranteed sector")
    return hw


def max_term(fam: Family, t: float) -> tuple[int, LogNumber]:
    """Largest term max_n a_n t^n of the truncated series, as (index, value)."""
    if fam.coeffs is None:
        raise NoCoefficientAccess(f"{fam.name} has no coefficient access")
    fam.check_radius(t)
    log_t = math.log(t)
    best_n, best = -1, -math.inf
    for n, c in enumerate(fam.coeffs.coeffs):
        if c > 0:
            v = log_of_fraction(c) + n * log_t
            if v > best:
                best_n, best = n, v
    if best_n < 0:
        raise NoCoefficientAccess("series has no positive coefficients")
    return best_n, LogNumber.from_log(best)


def estimate_order(fam: Family, t_grid: Sequence[float]) -> float:
    """Order-of-growth estimate max over the grid of ln m_f(t) / ln t."""
    if math.isfinite(fam.radius):
        raise NotEntire(f"{fam.name} has finite radius {fam.radius}")
    vals = []
    for t in t_grid:
        if t <= 1.0:
            raise ValueError("grid radii must exceed 1")
        m = fam.mean(t)
        if m > 0:
            vals.append(math.log(m) / math.log(t))
    if not vals:
        raise ZeroMean("mean vanishes on the whole grid")
    return max(vals)


# -- derivatives of f ----------------------------------------------------------


def eval_real(fam: Family, t: float) -> tuple[float, float, float, float]:
    """(f, f', f'', f''') at t, reconstructed from the cumulants.

    Uses t^j f^(j)/f = j-th factorial moment; values can overflow for huge
    ln f(t), which is fine at desk scale (the asymptotic pipeline consumes
    logs, never these raw values).
    """
    fam.check_radius(t)
    f = math.exp(fam.log_value(t))
    fm1 = factorial_moment(fam, t, 1)
    fm2 = factorial_moment(fam, t, 2)
    fm3 = factorial_moment(fam, t, 3)
    return f, f * fm1 / t, f * fm2 / t**2, f * fm3 / t**3


# -- building families from raw coefficients -----------------------------------


def family_from_coeffs(
    coeffs: se.CoeffSeries,
    name: str = "custom",
    radius: float = math.inf,
    q_gcd: int | None = None,
) -> Family:
    """Family backed purely by a truncated coefficient list.

    Evaluations are straight finite sums, so the result is only trustworthy
    at radii where the discarded tail is negligible; its intended use is as
    an independent cross-check oracle in tests (products, subordination) and
    for polynomial data, where the truncation is the whole function.
    """
    pairs = [(n, float(c)) for n, c in enumerate(coeffs.coeffs) if c != 0]
    if not pairs or coeffs.coeffs[0] <= 0:
        raise ValueError("coefficient family needs a positive constant term")

    def f_at(t: float) -> float:
        return math.fsum(c * t**n for n, c in pairs)

    def log_value(t: float) -> float:
        return math.log(f_at(t))

    def mean_fn(t: float) -> float:
        f = f_at(t)
        return math.fsum(n * c * t**n for n, c in pairs) / f

    def variance_fn(t: float) -> float:
        f = f_at(t)
        m = mean_fn(t)
        ex2 = math.fsum(n * n * c * t**n for n, c in pairs) / f
        return ex2 - m * m

    def fulcrum34_fn(s: float) -> tuple[float, float]:
        t = math.exp(s)
        f = f_at(t)
        m = mean_fn(t)
        mu3 = math.fsum((n - m) ** 3 * c * t**n for n, c in pairs) / f
        mu4 = math.fsum((n - m) ** 4 * c * t**n for n, c in pairs) / f
        var = variance_fn(t)
        return mu3, mu4 - 3.0 * var * var

    dense = [complex(float(c)) for c in coeffs.coeffs]

    def log_complex_dense(z: complex) -> complex:
        acc = complex(0.0)
        for c in reversed(dense):
            acc = acc * z + c
        return cmath.log(acc)

    return Family(
        name=name,
        radius=radius,
        mean_sup=float(coeffs.order) if math.isinf(radius) else math.inf,
        log_value=log_value,
        mean=mean_fn,
        variance=variance_fn,
        log_value_complex=log_complex_dense,
        coeffs=coeffs,
        q_gcd=q_gcd if q_gcd is not None else se.support_gcd(coeffs),
        fulcrum34=fulcrum34_fn,
    )
