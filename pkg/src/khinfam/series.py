"""Exact arithmetic on truncated power series with rational coefficients.

A :class:`CoeffSeries` holds the coefficients a_0..a_N of a power series as
exact ``Fraction`` values. All operations truncate to the common order and
are exact at every retained index, which makes this module the ground-truth
oracle for the asymptotic estimators in the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    IndexBeyondTruncation,
    NonzeroInnerConstant,
    ZeroConstantTerm,
)

DEFAULT_ORDER = 4096

Rat = Fraction | int


def _frac(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CoeffSeries:
    """Truncated power series: coefficients for indices 0..order inclusive."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @staticmethod
    def from_list(values: Iterable[Rat], order: int | None = None) -> "CoeffSeries":
        cs = [_frac(v) for v in values]
        if order is not None:
            cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        return CoeffSeries(tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> Fraction:
        if n < 0 or n > self.order:
            raise IndexBeyondTruncation(f"index {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "CoeffSeries":
        if order >= self.order:
            return self.pad(order)
        return CoeffSeries(self.coeffs[: order + 1])

    def pad(self, order: int) -> "CoeffSeries":
        if order <= self.order:
            return self
        return CoeffSeries(self.coeffs + (Fraction(0),) * (order - self.order))

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def nonzero_indices(self) -> list[int]:
        return [n for n, c in enumerate(self.coeffs) if c != 0]

    def eval_at(self, t: Fraction) -> Fraction:
        """Exact Horner evaluation of the truncated polynomial."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"CoeffSeries([{head}{tail}], order={self.order})"


@dataclass(frozen=True)
class SeriesClassTag:
    """Membership flags for the non-negative coefficient classes.

    ``in_k`` needs a positive constant term and at least two nonzero
    coefficients; ``in_ks`` allows a vanishing constant term, with ``shift``
    the least index whose removal puts the series back in the base class.
    """

    in_k: bool
    in_ks: bool
    shift: int


def class_tag(f: CoeffSeries) -> SeriesClassTag:
    if not f.is_nonnegative():
        return SeriesClassTag(in_k=False, in_ks=False, shift=0)
    nz = f.nonzero_indices()
    if len(nz) < 2:
        return SeriesClassTag(in_k=False, in_ks=False, shift=0)
    shift = nz[0]
    return SeriesClassTag(in_k=shift == 0, in_ks=True, shift=shift)


def add(a: CoeffSeries, b: CoeffSeries) -> CoeffSeries:
    n = min(a.order, b.order)
    return CoeffSeries(tuple(a.coeffs[i] + b.coeffs[i] for i in range(n + 1)))


def scale(a: CoeffSeries, c: Rat) -> CoeffSeries:
    c = _frac(c)
    return CoeffSeries(tuple(c * x for x in a.coeffs))


def mul(a: CoeffSeries, b: CoeffSeries) -> CoeffSeries:
    """Convolution product, truncated at the smaller operand order."""
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        ai = ac[i]
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            bj = bc[j]
            if bj != 0:
                out[i + j] += ai * bj
    return CoeffSeries(tuple(out))


def pow(a: CoeffSeries, n: int) -> CoeffSeries:  # noqa: A001 - mirrors the operation name
    """Binary exponentiation with truncation after every multiply."""
    if n < 1:
        raise ValueError("exponent must be >= 1")
    result: CoeffSeries | None = None
    base = a
    while n > 0:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    assert result is not None
    return result


def derivative_series(f: CoeffSeries) -> CoeffSeries:
    """The series z*f'(z): coefficient n becomes n*a_n."""
    return CoeffSeries(tuple(n * c for n, c in enumerate(f.coeffs)))


def differentiate(f: CoeffSeries) -> CoeffSeries:
    """Plain derivative f'(z); drops one order."""
    if f.order == 0:
        return CoeffSeries((Fraction(0),))
    return CoeffSeries(tuple((n + 1) * f.coeffs[n + 1] for n in range(f.order)))


def exp_series(g: CoeffSeries) -> tuple[CoeffSeries, Fraction]:
    """Exponential of a series.

    Returns ``(series, g0)`` where ``series`` is exp(g - g0) with exact
    rational coefficients and ``g0`` is the constant term of ``g``. The
    transcendental factor e^{g0} stays symbolic as the returned exponent,
    which keeps the coefficient lattice rational.

    Uses the derivative identity f' = g' f, i.e. n f_n = sum k g_k f_{n-k}.
    """
    g0 = g.coeffs[0]
    n = g.order
    f = [Fraction(0)] * (n + 1)
    f[0] = Fraction(1)
    gc = g.coeffs
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(1, m + 1):
            if gc[k] != 0 and f[m - k] != 0:
                acc += k * gc[k] * f[m - k]
        f[m] = acc / m
    return CoeffSeries(tuple(f)), g0


def log_series(f: CoeffSeries) -> CoeffSeries:
    """Logarithm of a series with positive constant term.

    Returns log(f / f0) with constant term 0; the scalar log(f0) is not
    representable as a rational and is left to the caller.
    """
    f0 = f.coeffs[0]
    if f0 == 0:
        raise ZeroConstantTerm("log_series requires a nonzero constant term")
    n = f.order
    fc = [c / f0 for c in f.coeffs]
    l = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        acc = m * fc[m]
        for k in range(1, m):
            acc -= k * l[k] * fc[m - k]
        l[m] = acc / m
    return CoeffSeries(tuple(l))


def compose(f: CoeffSeries, g: CoeffSeries) -> CoeffSeries:
    """Composition f(g(z)) for g with g(0) = 0, by Horner evaluation."""
    if g.coeffs[0] != 0:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    n = min(f.order, g.order)
    gt = g.truncate(n)
    acc = CoeffSeries.from_list([f.coeffs[n]], order=n)
    for k in range(n - 1, -1, -1):
        acc = mul(acc, gt)
        acc = CoeffSeries((acc.coeffs[0] + f.coeffs[k],) + acc.coeffs[1:])
    return acc


def reciprocal(f: CoeffSeries, order: int | None = None) -> CoeffSeries:
    """Multiplicative inverse 1/f, needing f(0) != 0."""
    f0 = f.coeffs[0]
    if f0 == 0:
        raise ZeroConstantTerm("reciprocal requires a nonzero constant term")
    n = f.order if order is None else order
    fc = f.pad(n).coeffs
    inv = [Fraction(0)] * (n + 1)
    inv[0] = 1 / f0
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(1, m + 1):
            if fc[k] != 0:
                acc += fc[k] * inv[m - k]
        inv[m] = -acc / f0
    return CoeffSeries(tuple(inv))


def lagrange_invert(psi: CoeffSeries, n_max: int, check: bool = False) -> CoeffSeries:
    """Solve g = z*psi(g) for the first n_max coefficients of g.

    Coefficient n of g is coeff_{n-1}(psi^n)/n. With ``check`` the result is
    recomputed by the fixed-point iteration g <- z*psi(g) and both must agree
    exactly.
    """
    if psi.coeffs[0] == 0:
        raise ZeroConstantTerm("Lagrange data must have psi(0) != 0")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    base = psi.truncate(n_max - 1)
    out = [Fraction(0)] * (n_max + 1)
    power = CoeffSeries.from_list([1], order=n_max - 1)
    for n in range(1, n_max + 1):
        power = mul(power, base)
        out[n] = power.coeff(n - 1) / n
    g = CoeffSeries(tuple(out))
    if check:
        fixed = lagrange_fixed_point(psi, n_max)
        if fixed != g:
            raise AssertionError("inversion formula and fixed-point iteration disagree")
    return g


def lagrange_fixed_point(psi: CoeffSeries, n_max: int) -> CoeffSeries:
    """Independent route to the Lagrange solution: iterate g <- z*psi(g).

    Each pass fixes one more coefficient, so the working order grows with the
    iteration count instead of paying full-order compositions throughout.
    """
    if psi.coeffs[0] == 0:
        raise ZeroConstantTerm("Lagrange data must have psi(0) != 0")
    g = CoeffSeries.from_list([0], order=1)
    for m in range(1, n_max + 1):
        val = compose(psi.truncate(m - 1).pad(m), g.pad(m).truncate(m))
        shifted = (Fraction(0),) + val.coeffs[:m]
        g = CoeffSeries(shifted)
    return g.pad(n_max)


def support_gcd(f: CoeffSeries) -> int:
    """gcd of the indices of nonzero coefficients at positive index."""
    q = 0
    for n in f.nonzero_indices():
        if n == 0:
            continue
        q = gcd(q, n)
    return q if q else 1


def serialize(f: CoeffSeries) -> str:
    """One coefficient per line as numerator/denominator, after a header."""
    lines = [f"order={f.order}"]
    lines.extend(f"{c.numerator}/{c.denominator}" for c in f.coeffs)
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> CoeffSeries:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or not lines[0].startswith("order="):
        raise ValueError("missing order= header")
    order = int(lines[0][len("order="):])
    coeffs = [Fraction(ln) for ln in lines[1:]]
    if len(coeffs) != order + 1:
        raise ValueError("coefficient count does not match header")
    return CoeffSeries(tuple(coeffs))


def schoolbook_mul(a: Sequence[Rat], b: Sequence[Rat]) -> list[Fraction]:
    """Reference double-loop convolution used by tests as an oracle."""
    n = min(len(a), len(b)) - 1
    out = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        for j in range(k + 1):
            out[k] += _frac(a[j]) * _frac(b[k - j])
    return out
