"""Saddle-point coefficient estimators and Gaussianity diagnostics.

The central pipeline: solve m_f(t_n) = n, then estimate the n-th
coefficient as f(t_n) / (sqrt(2 pi) sigma_f(t_n) t_n^n). A closed-form
variant replaces the exact mean/deviation laws by their asymptotic
approximations, which removes the root-finding step for the partition
catalog. Everything is carried in log space.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import catalog as cat
from . import family as fm
from .errors import (
    ComplexEvalUnavailable,
    GcdNotOne,
    NoCoefficientAccess,
    QGcdNotOne,
    TargetAboveMeanSup,
    UnsupportedColoredOrder,
    WindowTooNarrow,
)
from .family import Family
from .numerics import (
    LogNumber,
    bracket_increasing,
    lambert_w0,
    log_gamma,
    solve_monotone,
    zeta_prime_neg,
    zeta_real,
)


@dataclass(frozen=True)
class SaddlePoint:
    n: float  # the mean target; an index for coefficient estimates
    t: float
    log_f: float
    mean: float
    variance: float


@dataclass(frozen=True)
class Estimate:
    method: str
    value: LogNumber
    meta: dict = field(default_factory=dict, compare=False)

    def ratio_to(self, exact: LogNumber) -> float:
        """exact / estimate as a float."""
        return exact.ratio(self.value)


def saddle_solve(fam: Family, n: float, tol: float | None = None) -> SaddlePoint:
    """The unique radius t_n with m_f(t_n) = n."""
    if n <= 0:
        raise ValueError("saddle target must be positive")
    if n >= fam.mean_sup:
        raise TargetAboveMeanSup(f"target {n} >= mean limit {fam.mean_sup} of {fam.name}")
    bracket = bracket_increasing(fam.mean, n, fam.radius)
    t = solve_monotone(fam.mean, n, bracket, tol_value=tol)
    return SaddlePoint(
        n=int(n) if float(n).is_integer() else n,
        t=t,
        log_f=fam.log_value(t),
        mean=fam.mean(t),
        variance=fam.variance(t),
    )


def hayman_estimate(fam: Family, n: int, allow_rescaled: bool = True) -> Estimate:
    """Saddle-point estimate of coefficient n.

    For families supported on multiples of q > 1 the plain formula is wrong;
    the rescaled variant (valid only at multiples of q) multiplies by q.
    """
    meta: dict = {"n": n, "family": fam.name}
    q = fam.q_gcd
    if q > 1:
        if not allow_rescaled:
            raise QGcdNotOne(f"{fam.name} has coefficient support gcd {q}")
        if n % q != 0:
            raise QGcdNotOne(f"coefficient {n} of {fam.name} vanishes (support gcd {q})")
        meta["rescaled_gcd"] = q
    sp = saddle_solve(fam, float(n))
    ln = (
        math.log(q)
        + sp.log_f
        - n * math.log(sp.t)
        - 0.5 * math.log(2.0 * math.pi * sp.variance)
    )
    meta["t"] = sp.t
    return Estimate("hayman", LogNumber.from_log(ln), meta)


def baez_duarte_estimate(fam: Family, n: int) -> Estimate:
    """Closed-saddle estimate using the approximate mean/deviation laws.

    No root finding: tau_n comes from inverting the approximate mean law in
    closed form; the series value f(tau_n) is still the true one.
    """
    if fam.spec_key is None:
        raise cat.NoApproxAvailable(f"{fam.name} has no registered approximate laws")
    spec = cat.parse_family(fam.spec_key)
    approx = cat.approx_moments(spec)
    s_n = approx.s_for_mean(float(n))
    tau = math.exp(-s_n)
    sigma = approx.sigma_tilde(s_n)
    ln = fam.log_value(tau) - n * math.log(tau) - 0.5 * math.log(2.0 * math.pi) - math.log(sigma)
    return Estimate(
        "baez-duarte", LogNumber.from_log(ln), {"n": n, "tau": tau, "family": fam.name}
    )


# -- closed-form partition asymptotics -------------------------------------------


def closed_partition_asym(kind: str, n: int, a: int | None = None, b: int | None = None) -> Estimate:
    """Closed asymptotic formulas for the classical partition counts.

    kind: 'hr' (plain partitions), 'distinct', 'ingham' (needs a, b),
    'wright_plane' (plane partitions), 'colored' (needs b <= 2).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "hr":
        ln = -math.log(4.0 * math.sqrt(3.0)) - math.log(n) + math.pi * math.sqrt(2.0 * n / 3.0)
        return Estimate("hr", LogNumber.from_log(ln), {"n": n})
    if kind == "distinct":
        ln = (
            -math.log(4.0 * 3.0**0.25)
            - 0.75 * math.log(n)
            + math.pi * math.sqrt(n / 3.0)
        )
        return Estimate("distinct", LogNumber.from_log(ln), {"n": n})
    if kind == "ingham":
        if a is None or b is None or a < 1 or b < 1:
            raise ValueError("ingham needs integers a, b >= 1")
        if math.gcd(a, b) != 1:
            raise GcdNotOne(f"ingham needs gcd(a, b) = 1, got gcd({a},{b}) != 1")
        z2 = zeta_real(2.0)
        ln_const = (
            -0.5 * math.log(2.0)
            - math.log(2.0 * math.pi)
            + log_gamma(b / a)
            + (b / (2.0 * a) - 0.5) * math.log(a)
            + (b / (2.0 * a)) * math.log(z2)
        )
        ln = ln_const - (0.5 + b / (2.0 * a)) * math.log(n) + math.pi * math.sqrt(2.0 * n / (3.0 * a))
        return Estimate("ingham", LogNumber.from_log(ln), {"n": n, "a": a, "b": b})
    if kind == "wright_plane":
        return _colored_estimate(1, n, "wright_plane")
    if kind == "colored":
        if b is None or b < 0:
            raise ValueError("colored needs an integer b >= 0")
        if b > 2:
            raise UnsupportedColoredOrder("colored asymptotics provided for b <= 2")
        return _colored_estimate(b, n, "colored")
    raise ValueError(f"unknown closed form {kind!r}")


def _colored_estimate(b: int, n: int, method: str) -> Estimate:
    zb = {0: -0.5, 1: -1.0 / 12.0, 2: 0.0}[b]
    gz = math.exp(log_gamma(b + 2.0)) * zeta_real(b + 2.0)
    ln_alpha = (
        -0.5 * math.log(2.0 * math.pi)
        + zeta_prime_neg(b)
        - 0.5 * math.log(b + 2.0)
        + (1.0 - 2.0 * zb) / (2.0 * (b + 2.0)) * math.log(gz)
    )
    beta_exp = (-2.0 * zb + b + 3.0) / (2.0 * (b + 2.0))
    gamma = (b + 2.0) / (b + 1.0) * gz ** (1.0 / (b + 2.0))
    ln = ln_alpha - beta_exp * math.log(n) + gamma * n ** ((b + 1.0) / (b + 2.0))
    return Estimate(method, LogNumber.from_log(ln), {"n": n, "b": b})


def moser_wyman(n: int) -> Estimate:
    """Closed asymptotic for the n-th Bell number over n factorial."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w = lambert_w0(float(n))
    ln = (
        math.expm1(w)
        - 0.5 * math.log(2.0 * math.pi)
        - 0.5 * (math.log(w) + math.log(w + 1.0) + w)
        - n * math.log(w)
    )
    return Estimate("moser-wyman", LogNumber.from_log(ln), {"n": n, "w": w})


# -- local limit diagnostics ------------------------------------------------------


def local_clt_sup(fam: Family, t: float, window: tuple[int, int] | None = None) -> float:
    """sup over the window of |mass * sqrt(2 pi) sigma - Gaussian density term|.

    The true statement takes the sup over all integers; a truncation can
    only certify a window, which must cover mean +- 10 sigma.
    """
    if fam.coeffs is None:
        raise NoCoefficientAccess(f"{fam.name} has no coefficient access")
    m = fam.mean(t)
    var = fam.variance(t)
    sigma = math.sqrt(var)
    lo = max(0, int(m - 10.0 * sigma))
    hi = int(m + 10.0 * sigma) + 1
    if window is not None:
        wlo, whi = window
        if wlo > lo or whi < hi:
            raise WindowTooNarrow(
                f"window [{wlo},{whi}] must cover mean +- 10 sigma = [{lo},{hi}]"
            )
        lo, hi = wlo, whi
    if hi > fam.coeffs.order:
        raise WindowTooNarrow(
            f"truncation {fam.coeffs.order} below required window top {hi}"
        )
    root_2pi = math.sqrt(2.0 * math.pi)
    best = 0.0
    for n in range(lo, hi + 1):
        p = fm.mass(fam, t, n)
        gauss = math.exp(-((m - n) ** 2) / (2.0 * var))
        best = max(best, abs(p * root_2pi * sigma - gauss))
    return best


def strong_gaussian_integral(fam: Family, t: float, tol: float = 1e-8) -> float:
    """Integral over |theta| <= pi sigma of |E e^{i theta X-check} - e^{-theta^2/2}|.

    Composite Simpson on a 4096-point base grid with interval halving until
    two successive refinements agree to ``tol``.
    """
    if fam.log_value_complex is None:
        raise ComplexEvalUnavailable(f"{fam.name} has no complex evaluation")
    sigma = math.sqrt(fam.variance(t))
    m = fam.mean(t)
    log_f = fam.log_value(t)
    half = math.pi * sigma

    def integrand(theta: float) -> float:
        z = t * cmath.exp(1j * theta / sigma)
        val = cmath.exp(fam.log_value_complex(z) - log_f - 1j * theta * m / sigma)
        return abs(val - math.exp(-theta * theta / 2.0))

    return _adaptive_simpson(integrand, -half, half, tol, base=4096)


def _adaptive_simpson(f, a: float, b: float, tol: float, base: int = 4096) -> float:
    n = base
    prev = _simpson(f, a, b, n)
    for _ in range(6):
        n *= 2
        cur = _simpson(f, a, b, n)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def _simpson(f, a: float, b: float, n: int) -> float:
    if n % 2:
        n += 1
    h = (b - a) / n
    acc = f(a) + f(b)
    acc += 4.0 * math.fsum(f(a + h * i) for i in range(1, n, 2))
    acc += 2.0 * math.fsum(f(a + h * i) for i in range(2, n, 2))
    return acc * h / 3.0


def gaussianity_ratio(fam: Family, t: float) -> float:
    """Skewness-type ratio F'''(s) / F''(s)^{3/2} at s = ln t."""
    s = math.log(t)
    d = fm.fulcrum_derivs(fam, s, max_order=3)
    return d[2] / d[1] ** 1.5


def cut_diagnostics(fam: Family, t: float, h: float, grid: int = 2048) -> tuple[float, float]:
    """Major/minor-arc diagnostics for a proposed cut angle h.

    major: sup_{|theta| <= h sigma} |E e^{i theta X-check} e^{theta^2/2} - 1|
    minor: sigma * sup_{h sigma <= |theta| <= pi sigma} |E e^{i theta X-check}|
    both over symmetric grids; the minor arc is empty when h >= pi.
    """
    if fam.log_value_complex is None:
        raise ComplexEvalUnavailable(f"{fam.name} has no complex evaluation")
    if not 0 < h <= math.pi:
        raise ValueError("cut angle must lie in (0, pi]")
    sigma = math.sqrt(fam.variance(t))
    m = fam.mean(t)
    log_f = fam.log_value(t)

    def phi(theta: float) -> complex:
        z = t * cmath.exp(1j * theta / sigma)
        return cmath.exp(fam.log_value_complex(z) - log_f - 1j * theta * m / sigma)

    major = 0.0
    for i in range(grid + 1):
        theta = h * sigma * i / grid
        v = abs(phi(theta) * cmath.exp(theta * theta / 2.0) - 1.0)
        major = max(major, v)
    minor = 0.0
    if h < math.pi:
        for i in range(grid + 1):
            theta = (h + (math.pi - h) * i / grid) * sigma
            minor = max(minor, abs(phi(theta)))
    return major, sigma * minor
