"""Named generating-function families.

Each catalog entry binds three things together: closed-form evaluators for
ln f, the mean and the variance; an exact integer/rational coefficient
oracle; and, for the partition-type families, the approximate mean/variance
laws and the axis asymptotics of f(e^{-s}) as s drops to 0.

Infinite sums (partition means, fulcrum derivatives) are truncated with an
explicit geometric tail criterion: stop once the current term is below
1e-16 of the partial sum and the majorant of the remaining tail is below
1e-14 of it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import series as se
from .errors import (
    InvalidSpec,
    NoApproxAvailable,
    NoAxisFormula,
    TruncationTooLarge,
)
from .family import Family
from .numerics import LogNumber, lambert_w0, log_gamma, zeta_prime_neg, zeta_real

MAX_TRUNC = 100_000

_REL_TERM = 1e-16
_REL_TAIL = 1e-14


@dataclass(frozen=True)
class FamilySpec:
    """Parsed description of a catalog family.

    Variants: exp, bernoulli, binom (n), geom, negbinom (n), poly (coeffs),
    bell, P, Q, Pab (a, b), Wab (a, b), expof (inner poly spec), canprod
    (zeros), setsoflists.
    """

    variant: str
    n: int | None = None
    a: int | None = None
    b: int | None = None
    coeffs: tuple[Fraction, ...] | None = None
    zeros: tuple[Fraction, ...] | None = None
    inner: "FamilySpec | None" = None

    def key(self) -> str:
        parts = [self.variant]
        if self.n is not None:
            parts.append(str(self.n))
        if self.a is not None:
            parts.append(f"{self.a},{self.b}")
        if self.coeffs is not None:
            parts.append(",".join(str(c) for c in self.coeffs))
        if self.zeros is not None:
            parts.append(",".join(str(z) for z in self.zeros))
        if self.inner is not None:
            parts.append(self.inner.key())
        return ":".join(parts)


def parse_family(text: str) -> FamilySpec:
    """Parse the textual grammar shared with the CLI."""
    text = text.strip()
    head, _, rest = text.partition(":")
    try:
        if head == "exp":
            return FamilySpec("exp")
        if head == "bernoulli":
            return FamilySpec("bernoulli")
        if head == "geom":
            return FamilySpec("geom")
        if head == "bell":
            return FamilySpec("bell")
        if head == "P":
            return FamilySpec("P")
        if head == "Q":
            return FamilySpec("Q")
        if head == "setsoflists":
            return FamilySpec("setsoflists")
        if head == "binom":
            return FamilySpec("binom", n=int(rest))
        if head == "negbinom":
            return FamilySpec("negbinom", n=int(rest))
        if head == "poly":
            return FamilySpec("poly", coeffs=tuple(_parse_rat(v) for v in rest.split(",")))
        if head == "Pab":
            a, b = (int(v) for v in rest.split(","))
            return FamilySpec("Pab", a=a, b=b)
        if head == "Wab":
            a, b = (int(v) for v in rest.split(","))
            return FamilySpec("Wab", a=a, b=b)
        if head == "expof":
            return FamilySpec("expof", inner=parse_family(rest))
        if head == "canprod":
            return FamilySpec("canprod", zeros=tuple(_parse_rat(v) for v in rest.split(",")))
    except InvalidSpec:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidSpec(f"cannot parse family {text!r}: {exc}") from exc
    raise InvalidSpec(
        f"unknown family {text!r}; grammar: exp | bernoulli | binom:N | geom | "
        "negbinom:N | poly:a0,a1,... | bell | P | Q | Pab:a,b | Wab:a,b | "
        "expof:poly:... | canprod:b1,b2,... | setsoflists"
    )


def _parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


def _validate(spec: FamilySpec) -> None:
    v = spec.variant
    if v in ("binom", "negbinom") and (spec.n is None or spec.n < 1):
        raise InvalidSpec(f"{v} needs an integer parameter >= 1")
    if v == "Pab" and (spec.a is None or spec.a < 1 or spec.b is None or spec.b < 1):
        raise InvalidSpec("Pab needs integers a, b >= 1")
    if v == "Wab" and (spec.a is None or spec.a < 1 or spec.b is None or spec.b < 0):
        raise InvalidSpec("Wab needs integers a >= 1, b >= 0")
    if v == "poly":
        cs = spec.coeffs or ()
        if len(cs) < 2 or cs[0] <= 0 or any(c < 0 for c in cs) or all(c == 0 for c in cs[1:]):
            raise InvalidSpec("poly needs a0 > 0, coefficients >= 0 and degree >= 1")
    if v == "expof":
        if spec.inner is None or spec.inner.variant != "poly":
            raise InvalidSpec("expof currently takes a poly inner spec")
        inner = spec.inner.coeffs or ()
        if not inner or inner[0] != 0 or any(c < 0 for c in inner) or all(c == 0 for c in inner):
            raise InvalidSpec("expof inner series needs g(0) = 0 and g nonzero, g >= 0")
    if v == "canprod":
        zs = spec.zeros or ()
        if not zs or any(z <= 0 for z in zs) or list(zs) != sorted(zs):
            raise InvalidSpec("canprod needs a positive increasing zero list")


# -- truncated-sum helpers -------------------------------------------------------


def _sum_terms(term: Callable[[int], float], majorant: Callable[[int], float],
               start: int = 1, step: int = 1) -> float:
    total = 0.0
    j = start
    while True:
        v = term(j)
        total += v
        if total > 0 and v < _REL_TERM * total and majorant(j + step) < _REL_TAIL * total:
            return total
        j += step
        if j > 10_000_000:
            raise TruncationTooLarge("series summation did not reach its tail criterion")


def _parts_sums(parts: Callable[[int], tuple[int, float]]):
    """Mean/variance/log sums for products prod (1 - t^p)^(-c) over parts.

    ``parts(j)`` yields (p_j, c_j); the part sizes p_j must be increasing.
    Returns closures for ln f, m, sigma^2 and the fulcrum derivative of
    order q >= 3.
    """

    def log_value(u: float) -> float:
        def term(j: int) -> float:
            p, c = parts(j)
            return -c * math.log1p(-u**p)

        def major(j: int) -> float:
            p, c = parts(j)
            return c * u**p / (1.0 - u)

        return _sum_terms(term, major)

    def mean(u: float) -> float:
        def term(j: int) -> float:
            p, c = parts(j)
            x = u**p
            return c * p * x / (1.0 - x)

        def major(j: int) -> float:
            p, c = parts(j)
            return c * p * u**p / (1.0 - u)

        return _sum_terms(term, major)

    def variance(u: float) -> float:
        def term(j: int) -> float:
            p, c = parts(j)
            x = u**p
            return c * p * p * x / (1.0 - x) ** 2

        def major(j: int) -> float:
            p, c = parts(j)
            return c * p * p * u**p / (1.0 - u) ** 2

        return _sum_terms(term, major)

    def log_value_complex(z: complex) -> complex:
        # sum_j -c_j Log(1 - z^{p_j}); |z| < 1 so the tail is geometric.
        total = complex(0.0)
        j = 1
        az = abs(z)
        while True:
            p, c = parts(j)
            w = z**p
            total += -c * cmath.log(1 - w)
            if az**p * c < 1e-17 * max(1.0, abs(total)) and az**p < 0.5:
                return total
            j += 1
            if j > 10_000_000:
                raise TruncationTooLarge("complex log product did not converge")

    def fulcrum_high(s: float, q: int) -> float:
        # F(s) = sum_j -c_j ln(1 - e^{p_j s}); F^(q)(s) = sum over the
        # expansion sum_{j,k} c_j p_j^q k^{q-1} e^{k p_j s}; summed as a
        # double series in (j, k).
        u = math.exp(s)

        def term(j: int) -> float:
            p, c = parts(j)
            x = u**p
            inner = 0.0
            k = 1
            xk = x
            while True:
                v = k ** (q - 1) * xk
                inner += v
                if v < 1e-17 * max(inner, 1e-300) and xk < 0.5:
                    break
                k += 1
                xk *= x
                if k > 10_000_000:
                    raise TruncationTooLarge("fulcrum inner sum did not converge")
            return c * float(p) ** q * inner

        def major(j: int) -> float:
            p, c = parts(j)
            return c * float(p) ** q * u**p / (1.0 - u) ** q

        return _sum_terms(term, major)

    return log_value, mean, variance, log_value_complex, fulcrum_high


# -- exact coefficient oracles ---------------------------------------------------


def pentagonal_partitions(n_max: int) -> list[int]:
    """p(0..n_max) by the pentagonal-number recurrence."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = 1 if k % 2 == 1 else -1
            if g1 <= n:
                total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def product_expansion(parts_mult: Sequence[tuple[int, int]], n_max: int) -> list[int]:
    """Coefficients of prod (1 - z^p)^(-c) for the listed (p, c) pairs."""
    out = [0] * (n_max + 1)
    out[0] = 1
    for p, c in parts_mult:
        if p > n_max or c == 0:
            continue
        if c == 1:
            for n in range(p, n_max + 1):
                out[n] += out[n - p]
        else:
            # multiply by sum_m C(m+c-1, m) z^{pm}
            old = out[:]
            for n in range(p, n_max + 1):
                acc = 0
                binom = c  # C(m+c-1, m) for m = 1
                m = 1
                while p * m <= n:
                    acc += binom * old[n - p * m]
                    binom = binom * (c + m) // (m + 1)
                    m += 1
                out[n] = old[n] + acc
    return out


def distinct_expansion(n_max: int) -> list[int]:
    """Coefficients of prod (1 + z^j)."""
    out = [0] * (n_max + 1)
    out[0] = 1
    for p in range(1, n_max + 1):
        for n in range(n_max, p - 1, -1):
            out[n] += out[n - p]
    return out


def bell_numbers(n_max: int) -> list[int]:
    """B_0..B_n by the Bell triangle (each row starts with the previous
    row's last entry; the row's last entry is the next Bell number)."""
    if n_max == 0:
        return [1]
    out = [1, 1]
    row = [1]
    for _ in range(2, n_max + 1):
        new = [row[-1]]
        for v in row:
            new.append(new[-1] + v)
        row = new
        out.append(row[-1])
    return out


@lru_cache(maxsize=128)
def exact_coeffs(spec: FamilySpec, n_max: int) -> se.CoeffSeries:
    """Exact coefficients a_0..a_{n_max} of the catalog family."""
    _validate(spec)
    if n_max > MAX_TRUNC:
        raise TruncationTooLarge(f"truncation {n_max} exceeds the guard {MAX_TRUNC}")
    v = spec.variant
    if v == "exp":
        vals = [Fraction(1, math.factorial(n)) for n in range(n_max + 1)]
        return se.CoeffSeries(tuple(vals))
    if v == "bernoulli":
        return se.CoeffSeries.from_list([1, 1], order=n_max)
    if v == "binom":
        vals = [math.comb(spec.n, k) if k <= spec.n else 0 for k in range(n_max + 1)]
        return se.CoeffSeries.from_list(vals)
    if v == "geom":
        return se.CoeffSeries.from_list([1] * (n_max + 1))
    if v == "negbinom":
        vals = [math.comb(n + spec.n - 1, n) for n in range(n_max + 1)]
        return se.CoeffSeries.from_list(vals)
    if v == "poly":
        return se.CoeffSeries.from_list(spec.coeffs, order=n_max)
    if v == "bell":
        bells = bell_numbers(n_max)
        vals = [Fraction(b, math.factorial(n)) for n, b in enumerate(bells)]
        return se.CoeffSeries(tuple(vals))
    if v == "P":
        return se.CoeffSeries.from_list(pentagonal_partitions(n_max))
    if v == "Q":
        return se.CoeffSeries.from_list(distinct_expansion(n_max))
    if v == "Pab":
        parts = [(p, 1) for p in range(spec.b, n_max + 1, spec.a)]
        return se.CoeffSeries.from_list(product_expansion(parts, n_max))
    if v == "Wab":
        parts = []
        j = 1
        while j * spec.a <= n_max:
            parts.append((j * spec.a, j**spec.b))
            j += 1
        return se.CoeffSeries.from_list(product_expansion(parts, n_max))
    if v == "expof":
        g = se.CoeffSeries.from_list(spec.inner.coeffs, order=n_max)
        exp_g, _ = se.exp_series(g)
        return exp_g
    if v == "canprod":
        acc = se.CoeffSeries.from_list([1], order=n_max)
        for z in spec.zeros:
            acc = se.mul(acc, se.CoeffSeries.from_list([1, Fraction(1, 1) / z], order=n_max))
        return acc
    if v == "setsoflists":
        g = se.CoeffSeries.from_list([0] + [1] * n_max)
        exp_g, _ = se.exp_series(g)
        return exp_g
    raise InvalidSpec(f"unknown variant {v}")


# -- family construction ---------------------------------------------------------


def make_family(spec: FamilySpec, trunc: int = 512) -> Family:
    """Bind closed-form evaluators and the exact oracle into a Family."""
    _validate(spec)
    coeffs = exact_coeffs(spec, trunc)
    v = spec.variant
    usg = v in ("exp", "bell", "P", "Q") or (v == "Wab" and spec.a == 1)
    key = spec.key()

    if v == "exp":
        return Family(
            name="exp", radius=math.inf, mean_sup=math.inf,
            log_value=lambda t: t,
            mean=lambda t: t,
            variance=lambda t: t,
            log_value_complex=lambda z: z,
            coeffs=coeffs, usg=True,
            fulcrum34=lambda s: (math.exp(s), math.exp(s)),
            spec_key=key,
        )

    if v in ("bernoulli", "binom"):
        n = 1 if v == "bernoulli" else spec.n
        return Family(
            name=key, radius=math.inf, mean_sup=float(n),
            log_value=lambda t: n * math.log1p(t),
            mean=lambda t: n * t / (1.0 + t),
            variance=lambda t: n * t / (1.0 + t) ** 2,
            log_value_complex=lambda z: n * cmath.log(1 + z),
            coeffs=coeffs,
            fulcrum34=lambda s: _binom_f34(n, math.exp(s)),
            spec_key=key,
        )

    if v in ("geom", "negbinom"):
        n = 1 if v == "geom" else spec.n
        return Family(
            name=key, radius=1.0, mean_sup=math.inf,
            log_value=lambda t: -n * math.log1p(-t),
            mean=lambda t: n * t / (1.0 - t),
            variance=lambda t: n * t / (1.0 - t) ** 2,
            log_value_complex=lambda z: -n * cmath.log(1 - z),
            coeffs=coeffs,
            fulcrum34=lambda s: _geom_f34(n, math.exp(s)),
            spec_key=key,
        )

    if v in ("poly", "canprod"):
        if v == "canprod":
            poly = exact_coeffs(spec, len(spec.zeros))
        else:
            poly = se.CoeffSeries.from_list(spec.coeffs)
        from .family import family_from_coeffs

        base = family_from_coeffs(poly, name=key, radius=math.inf)
        return Family(
            name=key, radius=math.inf, mean_sup=float(poly.order),
            log_value=base.log_value, mean=base.mean, variance=base.variance,
            log_value_complex=base.log_value_complex,
            coeffs=coeffs, q_gcd=base.q_gcd, fulcrum34=base.fulcrum34,
            spec_key=key,
            meta={"truncated_product": v == "canprod"},
        )

    if v == "bell":
        def f34(s: float) -> tuple[float, float]:
            t = math.exp(s)
            et = math.exp(t)
            return (t + 3 * t * t + t**3) * et, (t + 7 * t * t + 6 * t**3 + t**4) * et

        return Family(
            name="bell", radius=math.inf, mean_sup=math.inf,
            log_value=lambda t: math.expm1(t),
            mean=lambda t: t * math.exp(t),
            variance=lambda t: t * (1.0 + t) * math.exp(t),
            log_value_complex=lambda z: cmath.exp(z) - 1,
            coeffs=coeffs, usg=True, fulcrum34=f34,
            spec_key=key,
        )

    if v == "expof":
        g = se.CoeffSeries.from_list(spec.inner.coeffs)
        return _exp_poly_family(key, g, coeffs)

    if v == "setsoflists":
        def f34(s: float) -> tuple[float, float]:
            t = math.exp(s)
            f3 = t * (1 + 4 * t + t * t) / (1 - t) ** 4
            f4 = t * (1 + 11 * t + 11 * t * t + t**3) / (1 - t) ** 5
            return f3, f4

        return Family(
            name="setsoflists", radius=1.0, mean_sup=math.inf,
            log_value=lambda t: t / (1.0 - t),
            mean=lambda t: t / (1.0 - t) ** 2,
            variance=lambda t: t * (1.0 + t) / (1.0 - t) ** 3,
            log_value_complex=lambda z: z / (1 - z),
            coeffs=coeffs, fulcrum34=f34,
            spec_key=key,
        )

    # partition products: P, Q, Pab, Wab
    if v == "P":
        parts = lambda j: (j, 1)  # noqa: E731
        q_gcd = 1
    elif v == "Q":
        parts = lambda j: (2 * j - 1, 1)  # noqa: E731  (odd-parts form of the product)
        q_gcd = 1
    elif v == "Pab":
        a, b = spec.a, spec.b
        parts = lambda j: (a * (j - 1) + b, 1)  # noqa: E731
        q_gcd = math.gcd(a, b)
    else:  # Wab
        a, b = spec.a, spec.b
        parts = lambda j: (a * j, j**b)  # noqa: E731
        q_gcd = a

    log_value, mean, variance, log_complex, fulcrum_q = _parts_sums(parts)

    return Family(
        name=key, radius=1.0, mean_sup=math.inf,
        log_value=log_value, mean=mean, variance=variance,
        log_value_complex=log_complex,
        coeffs=coeffs, q_gcd=q_gcd, usg=usg,
        fulcrum34=lambda s: (fulcrum_q(s, 3), fulcrum_q(s, 4)),
        spec_key=key,
    )


def _binom_f34(n: int, t: float) -> tuple[float, float]:
    f3 = n * t * (1 - t) / (1 + t) ** 3
    f4 = n * t * (1 - 4 * t + t * t) / (1 + t) ** 4
    return f3, f4


def _geom_f34(n: int, t: float) -> tuple[float, float]:
    f3 = n * t * (1 + t) / (1 - t) ** 3
    f4 = n * t * (1 + 4 * t + t * t) / (1 - t) ** 4
    return f3, f4


def _exp_poly_family(key: str, g: se.CoeffSeries, coeffs: se.CoeffSeries) -> Family:
    gf = [float(c) for c in g.coeffs]

    def g_at(t: float) -> float:
        return math.fsum(c * t**n for n, c in enumerate(gf) if c)

    def g_deriv(t: float, order: int) -> float:
        return math.fsum(
            math.prod(range(n - order + 1, n + 1)) * c * t ** (n - order)
            for n, c in enumerate(gf)
            if c and n >= order
        )

    def g_complex(z: complex) -> complex:
        acc = complex(0.0)
        for c in reversed(gf):
            acc = acc * z + c
        return acc

    def f34(s: float) -> tuple[float, float]:
        # F(s) = g(e^s): F^(q)(s) = sum_m m^q g_m e^{ms}
        t = math.exp(s)
        f3 = math.fsum(n**3 * c * t**n for n, c in enumerate(gf) if c)
        f4 = math.fsum(n**4 * c * t**n for n, c in enumerate(gf) if c)
        return f3, f4

    return Family(
        name=key, radius=math.inf, mean_sup=math.inf,
        log_value=g_at,
        mean=lambda t: t * g_deriv(t, 1),
        variance=lambda t: t * g_deriv(t, 1) + t * t * g_deriv(t, 2),
        log_value_complex=g_complex,
        coeffs=coeffs,
        q_gcd=se.support_gcd(g),
        fulcrum34=f34,
        spec_key=key,
    )


# -- approximate moments and axis asymptotics ------------------------------------


@dataclass(frozen=True)
class ApproxMoments:
    """Closed-form approximations of the mean and deviation laws.

    ``m_tilde``/``sigma_tilde`` are functions of s (t = e^{-s});
    ``s_for_mean(n)`` inverts m_tilde in closed form, and ``tau_for(n)``
    returns the corresponding radius e^{-s_n}.
    """

    m_tilde: Callable[[float], float]
    sigma_tilde: Callable[[float], float]
    s_for_mean: Callable[[float], float]

    def tau_for(self, n: float) -> float:
        return math.exp(-self.s_for_mean(n))


def approx_moments(spec: FamilySpec) -> ApproxMoments:
    """The closed approximate mean/variance laws of the partition catalog."""
    _validate(spec)
    v = spec.variant
    z2 = zeta_real(2.0)
    if v == "P":
        return ApproxMoments(
            m_tilde=lambda s: z2 / s**2,
            sigma_tilde=lambda s: math.sqrt(2.0 * z2 / s**3),
            s_for_mean=lambda n: math.sqrt(z2 / n),
        )
    if v == "Q":
        return ApproxMoments(
            m_tilde=lambda s: z2 / (2.0 * s**2),
            sigma_tilde=lambda s: math.sqrt(z2 / s**3),
            s_for_mean=lambda n: math.sqrt(z2 / (2.0 * n)),
        )
    if v == "Pab":
        a = float(spec.a)
        return ApproxMoments(
            m_tilde=lambda s: z2 / (a * s**2),
            sigma_tilde=lambda s: math.sqrt(2.0 * z2 / (a * s**3)),
            s_for_mean=lambda n: math.sqrt(z2 / (a * n)),
        )
    if v == "Wab":
        a, b = float(spec.a), float(spec.b)
        e = 1.0 + (b + 1.0) / a
        c = zeta_real(e) * math.exp(log_gamma(e)) / a
        c2 = zeta_real(e) * math.exp(log_gamma(e + 1.0)) / a
        return ApproxMoments(
            m_tilde=lambda s: c / s**e,
            sigma_tilde=lambda s: math.sqrt(c2 / s ** (e + 1.0)),
            s_for_mean=lambda n: (c / n) ** (1.0 / e),
        )
    if v == "bell":
        # exact mean law te^t: the inverse is the Lambert function, and the
        # deviation approximation is the true one.
        return ApproxMoments(
            m_tilde=lambda s: math.exp(-s) * math.exp(math.exp(-s)),
            sigma_tilde=lambda s: math.sqrt(
                math.exp(-s) * (1.0 + math.exp(-s)) * math.exp(math.exp(-s))
            ),
            s_for_mean=lambda n: -math.log(lambert_w0(n)),
        )
    raise NoApproxAvailable(f"no approximate moment law for {v}")


def axis_asymptotic(spec: FamilySpec, s: float) -> LogNumber:
    """Closed asymptotic value of f(e^{-s}) as s drops to 0, in log space."""
    _validate(spec)
    if s <= 0:
        raise NoAxisFormula("axis asymptotics need s > 0")
    v = spec.variant
    z2 = zeta_real(2.0)
    if v == "P":
        ln = z2 / s + 0.5 * math.log(s) - 0.5 * math.log(2.0 * math.pi)
        return LogNumber.from_log(ln)
    if v == "Q":
        ln = z2 / (2.0 * s) - 0.5 * math.log(2.0)
        return LogNumber.from_log(ln)
    if v == "Pab":
        a, b = spec.a, spec.b
        ln = (
            z2 / (a * s)
            + (b / a - 0.5) * math.log(a * s)
            + log_gamma(b / a)
            - 0.5 * math.log(2.0 * math.pi)
        )
        return LogNumber.from_log(ln)
    if v == "Wab":
        a, b = spec.a, spec.b
        if b > 2:
            raise NoAxisFormula("colored axis asymptotics need b <= 2 (zeta'(-b) table)")
        e = (b + 1.0) / a
        ln = (
            zeta_real(1.0 + e) * math.exp(log_gamma(e)) / a / s**e
            - _zeta_neg(b) * math.log(s)
            + a * zeta_prime_neg(b)
        )
        return LogNumber.from_log(ln)
    raise NoAxisFormula(f"no axis asymptotic formula for {v}")


def _zeta_neg(b: int) -> float:
    return {0: -0.5, 1: -1.0 / 12.0, 2: 0.0}[b]


# -- set/multiset coefficient transforms ------------------------------------------


def multiset_transform(c: Sequence[Fraction | int]) -> se.CoeffSeries:
    """Log-series of the multiset product prod (1 - z^j)^(-c_j).

    ``c[j]`` is the count for size j (index 0 ignored); the returned series
    g has b_m = (1/m) sum_{j | m} j c_j and satisfies exp(g) = product.
    """
    n = len(c) - 1
    out = [Fraction(0)] * (n + 1)
    for j in range(1, n + 1):
        cj = Fraction(c[j])
        if cj == 0:
            continue
        for m in range(j, n + 1, j):
            out[m] += j * cj
    for m in range(1, n + 1):
        out[m] /= m
    return se.CoeffSeries(tuple(out))


def powerset_transform(c: Sequence[Fraction | int]) -> se.CoeffSeries:
    """Log-series of the selection product prod (1 + z^j)^{c_j}.

    b_m = (1/m) sum_{jk = m} (-1)^{k+1} j c_j; the result may carry negative
    coefficients, in which case exp(g) is still the product but g leaves the
    non-negative class.
    """
    n = len(c) - 1
    out = [Fraction(0)] * (n + 1)
    for j in range(1, n + 1):
        cj = Fraction(c[j])
        if cj == 0:
            continue
        k = 1
        while j * k <= n:
            sign = 1 if k % 2 == 1 else -1
            out[j * k] += sign * j * cj
            k += 1
    for m in range(1, n + 1):
        out[m] /= m
    return se.CoeffSeries(tuple(out))


# -- Hayman-class coefficient criteria ---------------------------------------------


@dataclass(frozen=True)
class CriterionVerdict:
    ok: bool
    reason: str
    first_violation: int | None = None


def hayman_criterion_entire(
    g: se.CoeffSeries, B: float, beta: float, L: float, lam: float
) -> CriterionVerdict:
    """Window check of B beta^n/n! <= b_n <= L lam^n/n! with 2 lam < 3 beta."""
    if not (B > 0 and L > 0 and beta >= 0 and lam >= 0):
        raise ValueError("constants must satisfy B, L > 0 and beta, lam >= 0")
    if not 2.0 * lam < 3.0 * beta:
        return CriterionVerdict(False, "parameter-inequality")
    log_fact = 0.0
    for n in range(1, g.order + 1):
        log_fact += math.log(n)
        bn = float(g.coeff(n))
        lo = B * math.exp(n * math.log(beta) - log_fact) if beta > 0 else 0.0
        hi = L * math.exp(n * math.log(lam) - log_fact) if lam > 0 else 0.0
        if bn < lo * (1 - 1e-12) or bn > hi * (1 + 1e-12):
            return CriterionVerdict(False, "coefficient-bound", first_violation=n)
    return CriterionVerdict(True, "ok")


def hayman_criterion_finite(
    g: se.CoeffSeries, B: float, beta: float, L: float, lam: float, R: float
) -> CriterionVerdict:
    """Window check of B n^beta/R^n <= b_n <= L n^lam/R^n with 2 lam < 3 beta + 1."""
    if not (B > 0 and L > 0 and beta > -1 and lam > -1 and R > 0):
        raise ValueError("need B, L > 0, beta, lam > -1 and finite R > 0")
    if not 2.0 * lam < 3.0 * beta + 1.0:
        return CriterionVerdict(False, "parameter-inequality")
    log_r = math.log(R)
    for n in range(1, g.order + 1):
        bn = float(g.coeff(n))
        lo = B * math.exp(beta * math.log(n) - n * log_r)
        hi = L * math.exp(lam * math.log(n) - n * log_r)
        if bn < lo * (1 - 1e-12) or bn > hi * (1 + 1e-12):
            return CriterionVerdict(False, "coefficient-bound", first_violation=n)
    return CriterionVerdict(True, "ok")
