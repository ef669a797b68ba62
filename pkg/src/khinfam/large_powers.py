"""Asymptotics of the k-th coefficient of psi(z)^n across all k/n regimes.

Every estimator returns a log-space value; the exact oracle truncates psi at
order k (higher coefficients cannot reach index k of a power), raises it by
binary exponentiation and reads the coefficient, all in exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import series as se
from .errors import (
    BoundaryVarianceInfinite,
    BudgetExceeded,
    FirstCoefficientZero,
    KTooLarge,
    LAboveMeanSup,
    NoApplicableRegime,
    NoCoefficientAccess,
    NotUSG,
    PrefactorRadiusTooSmall,
    QGcdViolation,
    RatioOutOfBand,
    RegimeMismatch,
)
from .asym import Estimate, saddle_solve
from .family import Family
from .numerics import LogNumber, log_of_fraction

CONVOLUTION_BUDGET = 1_000_000_000
SMALL_K_MAX_RATIO = 0.05
LARGE_K_MIN_RATIO = 20.0
FIXED_K_MAX = 64


@dataclass(frozen=True)
class Regime:
    """Which asymptotic regime a (n, k) query falls into."""

    kind: str  # comparable | limit_l | boundary | small_k | small_k_refined | fixed_k | large_k
    a: float | None = None
    b: float | None = None
    l: float | None = None
    omega: float | None = None
    j: int | None = None


@dataclass(frozen=True)
class PowerCoeffQuery:
    psi: Family
    n: int
    k: int
    prefactor: Family | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 0:
            raise ValueError("need power n >= 1 and index k >= 0")


def exact_power_coeff(q: PowerCoeffQuery) -> Fraction:
    """coeff_k(psi^n), or of h*psi^n with a prefactor, exactly."""
    psi, n, k = q.psi, q.n, q.k
    if psi.coeffs is None:
        raise NoCoefficientAccess(f"{psi.name} carries no coefficients")
    cost = (k + 1) ** 2 * (2 * max(1, n.bit_length()))
    if cost > CONVOLUTION_BUDGET:
        raise BudgetExceeded(f"estimated {cost} coefficient-multiplies exceeds the budget")
    base = psi.coeffs.truncate(k)
    power = se.pow(base, n) if n > 1 else base
    if q.prefactor is not None:
        if q.prefactor.coeffs is None:
            raise NoCoefficientAccess("prefactor carries no coefficients")
        power = se.mul(power, q.prefactor.coeffs.truncate(k))
    return power.coeff(k)


def exact_power_coeff_log(q: PowerCoeffQuery) -> LogNumber:
    return LogNumber.from_fraction(exact_power_coeff(q))


def _estimate(
    method: str,
    q: PowerCoeffQuery,
    tau: float,
    sigma2: float,
    extra_log: float = 0.0,
    gcd_factor: int = 1,
    sqrt_term: float | None = None,
) -> Estimate:
    psi, n, k = q.psi, q.n, q.k
    ln = (
        math.log(gcd_factor)
        - 0.5 * math.log(2.0 * math.pi)
        + n * psi.log_value(tau)
        - k * math.log(tau)
        + extra_log
    )
    ln -= math.log(sqrt_term) if sqrt_term is not None else 0.5 * math.log(n * sigma2)
    meta = {"n": n, "k": k, "tau": tau, "psi": psi.name}
    return Estimate(method, LogNumber.from_log(ln), meta)


def estimate_comparable(q: PowerCoeffQuery, a: float, b: float) -> Estimate:
    """Regime k comparable with n: a <= k/n <= b < mean limit of psi."""
    psi, n, k = q.psi, q.n, q.k
    if not 0 < a < b < psi.mean_sup:
        raise RatioOutOfBand(f"need 0 < A < B < mean limit; got A={a}, B={b}")
    ratio = k / n
    if not a <= ratio <= b:
        raise RatioOutOfBand(f"k/n = {ratio} outside [{a}, {b}]")
    if k % psi.q_gcd != 0:
        raise QGcdViolation(f"coefficient {k} vanishes: support gcd is {psi.q_gcd}")
    sp = saddle_solve(psi, ratio)
    return _estimate("comparable", q, sp.t, sp.variance, gcd_factor=psi.q_gcd)


def estimate_limit_l(q: PowerCoeffQuery, l: float, omega: float) -> Estimate:
    """Regime k/n -> L with drift (nL - k)/sqrt(n) -> -omega; fixed saddle."""
    psi = q.psi
    if l >= psi.mean_sup:
        raise LAboveMeanSup(f"L = {l} >= mean limit {psi.mean_sup}")
    if q.k % psi.q_gcd != 0:
        raise QGcdViolation(f"coefficient {q.k} vanishes: support gcd is {psi.q_gcd}")
    sp = saddle_solve(psi, l)
    extra = -omega * omega / (2.0 * sp.variance)
    return _estimate("limit_l", q, sp.t, sp.variance, extra_log=extra, gcd_factor=psi.q_gcd)


def estimate_boundary(q: PowerCoeffQuery, omega: float = 0.0) -> Estimate:
    """Regime k/n -> L = mean limit, finite radius, finite boundary variance."""
    psi = q.psi
    if not math.isfinite(psi.radius) or not math.isfinite(psi.mean_sup):
        raise RegimeMismatch("boundary regime needs finite radius and finite mean limit")
    if psi.boundary_variance is None or not math.isfinite(psi.boundary_variance):
        raise BoundaryVarianceInfinite(
            f"{psi.name} has no finite boundary variance"
        )
    if q.k % psi.q_gcd != 0:
        raise QGcdViolation(f"coefficient {q.k} vanishes: support gcd is {psi.q_gcd}")
    var = psi.boundary_variance
    extra = -omega * omega / (2.0 * var)
    return _estimate("boundary", q, psi.radius, var, extra_log=extra, gcd_factor=psi.q_gcd)


def estimate_small_k(q: PowerCoeffQuery, max_ratio: float = SMALL_K_MAX_RATIO) -> Estimate:
    """Regime k -> infinity with k = o(n); needs psi'(0) > 0."""
    psi, n, k = q.psi, q.n, q.k
    _require_b1(psi)
    if k < 1 or k / n > max_ratio:
        raise RegimeMismatch(f"k/n = {k / n} not small (threshold {max_ratio})")
    sp = saddle_solve(psi, k / n)
    return _estimate("small_k", q, sp.t, sp.variance, sqrt_term=math.sqrt(k))


def series_b_coefficients(psi: se.CoeffSeries, j_max: int) -> list[Fraction]:
    """B_1..B_{j_max} with B_j = coeff_{j-1}((psi/psi')^{j-1}) / j.

    These are the expansion coefficients of ln psi(m^{-1}(z)) around 0 and
    depend only on the first j coefficients of psi.
    """
    if psi.coeff(0) == 0 or (psi.order >= 1 and psi.coeff(1) == 0):
        raise FirstCoefficientZero("B coefficients need psi(0) != 0 and psi'(0) != 0")
    out: list[Fraction] = [Fraction(1)]  # B_1 = 1
    dpsi = se.differentiate(psi)
    base = se.mul(psi.truncate(j_max), se.reciprocal(dpsi.truncate(j_max)))
    power = se.CoeffSeries.from_list([1], order=j_max)
    for j in range(2, j_max + 1):
        power = se.mul(power, base)
        out.append(power.coeff(j - 1) / j)
    return out


def estimate_small_k_refined(q: PowerCoeffQuery, j_terms: int) -> Estimate:
    """Small-k estimate with the J-term exponential correction in k^j/n^{j-1}."""
    psi, n, k = q.psi, q.n, q.k
    _require_b1(psi)
    if j_terms < 1:
        raise ValueError("need at least one correction term")
    if psi.coeffs is None:
        raise FirstCoefficientZero("refined small-k needs coefficient access")
    b0 = float(psi.coeffs.coeff(0))
    b1 = float(psi.coeffs.coeff(1))
    correction = 0.0
    if j_terms >= 2:
        bs = series_b_coefficients(psi.coeffs, j_terms)
        correction = math.fsum(
            float(bs[j - 1]) / (j - 1) * k**j / float(n) ** (j - 1)
            for j in range(2, j_terms + 1)
        )
    ln = (
        -0.5 * math.log(2.0 * math.pi)
        + (n - k) * math.log(b0)
        + k * math.log(b1)
        + k * math.log(n)
        + k
        - k * math.log(k)
        - 0.5 * math.log(k)
        - correction
    )
    meta = {"n": n, "k": k, "j_terms": j_terms, "psi": psi.name}
    return Estimate("small_k_refined", LogNumber.from_log(ln), meta)


@dataclass(frozen=True)
class FixedKPolynomial:
    """coeff_k(psi^n) = sum_l C(n, l) b0^{n-l} c_l, exact in n."""

    k: int
    b0: Fraction
    c: tuple[Fraction, ...]  # c[l] for l = 0..k

    def value_at(self, n: int) -> Fraction:
        total = Fraction(0)
        for l, cl in enumerate(self.c):
            if cl != 0 and l <= n:
                total += math.comb(n, l) * self.b0 ** (n - l) * cl
        return total

    def degree(self) -> int:
        for l in range(len(self.c) - 1, -1, -1):
            if self.c[l] != 0:
                return l
        return 0


def fixed_k_polynomial(psi: se.CoeffSeries, k: int) -> FixedKPolynomial:
    """Exact polynomial-in-n form of coeff_k(psi^n) for fixed k (k <= 64).

    c_l sums multinomials over the compositions j_1 + 2 j_2 + ... = k with
    j_1 + ... + j_k = l; enumerated over the partitions of k.
    """
    if k > FIXED_K_MAX:
        raise KTooLarge(f"fixed-k enumeration is guarded at k <= {FIXED_K_MAX}")
    b = [psi.coeff(i) if i <= psi.order else Fraction(0) for i in range(k + 1)]
    c = [Fraction(0)] * (k + 1)
    if k == 0:
        return FixedKPolynomial(0, b[0], (Fraction(1),))

    # iterate over partitions of k into parts >= 1 (multiplicity vectors)
    def recurse(remaining: int, max_part: int, mults: list[int]) -> None:
        if remaining == 0:
            l = sum(mults)
            weight = Fraction(math.factorial(l))
            for i, m in enumerate(mults):
                if m:
                    part = i + 1
                    if b[part] == 0:
                        return
                    weight *= b[part] ** m / math.factorial(m)
            c[l] += weight
            return
        for part in range(min(max_part, remaining), 0, -1):
            mults[part - 1] += 1
            recurse(remaining - part, part, mults)
            mults[part - 1] -= 1

    recurse(k, k, [0] * k)
    return FixedKPolynomial(k, b[0], tuple(c))


def estimate_large_k(q: PowerCoeffQuery, min_ratio: float = LARGE_K_MIN_RATIO) -> Estimate:
    """Regime k/n -> infinity; needs a uniformly-strongly-Gaussian psi."""
    psi, n, k = q.psi, q.n, q.k
    if not psi.usg:
        raise NotUSG(f"{psi.name} is not flagged uniformly strongly Gaussian")
    if k / n < min_ratio:
        raise RegimeMismatch(f"k/n = {k / n} below the large-k threshold {min_ratio}")
    sp = saddle_solve(psi, k / n)
    return _estimate("large_k", q, sp.t, sp.variance)


def estimate_with_prefactor(q: PowerCoeffQuery, regime: Regime) -> Estimate:
    """Coefficients of h(z) psi(z)^n in the comparable or small-k regimes."""
    if q.prefactor is None:
        raise ValueError("query has no prefactor family")
    h = q.prefactor
    if h.radius < q.psi.radius:
        raise PrefactorRadiusTooSmall(
            f"prefactor radius {h.radius} below psi radius {q.psi.radius}"
        )
    bare = PowerCoeffQuery(q.psi, q.n, q.k)
    if regime.kind == "comparable":
        est = estimate_comparable(bare, regime.a, regime.b)
        tau = est.meta["tau"]
        ln = est.value.log_abs + h.log_value(tau)
    elif regime.kind == "small_k":
        est = estimate_small_k(bare)
        if h.coeffs is None:
            raise PrefactorRadiusTooSmall("prefactor needs coefficients for h(0)")
        ln = est.value.log_abs + log_of_fraction(h.coeffs.coeff(0))
    else:
        raise RegimeMismatch(f"prefactor estimates cover comparable/small_k, not {regime.kind}")
    meta = dict(est.meta)
    meta["prefactor"] = h.name
    return Estimate(f"{est.method}+prefactor", LogNumber.from_log(ln), meta)


def auto_regime(q: PowerCoeffQuery) -> Regime:
    """Deterministic regime classification with the default policy thresholds."""
    psi, n, k = q.psi, q.n, q.k
    if k <= FIXED_K_MAX and n >= 10 * k:
        return Regime("fixed_k")
    ratio = k / n
    if ratio <= SMALL_K_MAX_RATIO and _has_b1(psi):
        return Regime("small_k")
    if psi.usg and ratio >= LARGE_K_MIN_RATIO:
        return Regime("large_k")
    cap = min(psi.mean_sup, 20.0)
    a, b = 0.05 * cap, 0.95 * cap
    if a <= ratio <= b and k % psi.q_gcd == 0:
        return Regime("comparable", a=a, b=b)
    raise NoApplicableRegime(
        f"no regime covers k/n = {ratio} for {psi.name} (mean limit {psi.mean_sup})"
    )


def estimate_auto(q: PowerCoeffQuery) -> tuple[Regime, Estimate | FixedKPolynomial]:
    regime = auto_regime(q)
    if regime.kind == "fixed_k":
        if q.psi.coeffs is None:
            raise NoApplicableRegime("fixed-k route needs coefficients")
        poly = fixed_k_polynomial(q.psi.coeffs, q.k)
        return regime, poly
    if regime.kind == "small_k":
        return regime, estimate_small_k(q)
    if regime.kind == "large_k":
        return regime, estimate_large_k(q)
    return regime, estimate_comparable(q, regime.a, regime.b)


def _has_b1(psi: Family) -> bool:
    if psi.coeffs is not None:
        return psi.coeffs.order >= 1 and psi.coeffs.coeff(1) > 0
    return psi.q_gcd == 1


def _require_b1(psi: Family) -> None:
    if not _has_b1(psi):
        raise FirstCoefficientZero(f"{psi.name} has psi'(0) = 0")
