"""Gamma, Beta and (non-regularised) incomplete Beta functions for x > 0."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quadrature import QuadSettings, integrate


class DomainError(ValueError):
    """An argument lies outside the function's supported domain."""


@dataclass(frozen=True)
class SpecialValue:
    value: float
    abs_error_bound: float

    def __float__(self) -> float:
        return self.value


# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = 2.220446049250313e-16
_LOG_MAX = math.log(1.7976931348623157e308)


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return x


def _lanczos_log(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = _check_positive("x", x)
    if x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x keeps the series in its accurate range
        return _lanczos_log(x + 1.0) - math.log(x)
    return _lanczos_log(x)


def gamma(x: float) -> SpecialValue:
    x = _check_positive("x", x)
    if x == int(x) and x <= 21:
        return SpecialValue(float(math.factorial(int(x) - 1)), 0.0)
    lg = log_gamma(x)
    if lg > _LOG_MAX:
        raise DomainError(f"gamma({x!r}) overflows double precision")
    value = math.exp(lg)
    # series error plus the exp() amplification of the rounding in lg
    return SpecialValue(value, value * _EPS * (64.0 + 4.0 * abs(lg)))


def log_beta(p: float, q: float) -> float:
    p = _check_positive("p", p)
    q = _check_positive("q", q)
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q)


def beta(p: float, q: float) -> SpecialValue:
    """Complete Beta function Gamma(p)Gamma(q)/Gamma(p+q), evaluated in log space."""
    lb = log_beta(p, q)
    if lb > _LOG_MAX:
        raise DomainError(f"beta({p!r}, {q!r}) overflows double precision")
    value = math.exp(lb)
    return SpecialValue(value, value * _EPS * (16.0 + 4.0 * abs(lb)))


_IBETA_SETTINGS = QuadSettings(abs_tol=1e-13, max_subdivisions=4000)


def incomplete_beta(x: float, p: float, q: float) -> SpecialValue:
    """Non-regularised lower incomplete Beta, int_0^x t^(p-1) (1-t)^(q-1) dt.

    Endpoint singularities are removed by exact power substitutions:
    t = s^(1/p) on [0, 1/2] when p < 1 and t = 1 - s^(1/q) on [1/2, 1]
    when q < 1.
    """
    p = _check_positive("p", p)
    q = _check_positive("q", q)
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    if x == 0.0:
        return SpecialValue(0.0, 0.0)

    c = min(x, 0.5)
    if p < 1.0:
        v1, e1 = integrate(
            lambda s: (1.0 - s ** (1.0 / p)) ** (q - 1.0) / p,
            0.0,
            c**p,
            _IBETA_SETTINGS,
        )
    else:
        v1, e1 = integrate(
            lambda t: t ** (p - 1.0) * (1.0 - t) ** (q - 1.0), 0.0, c, _IBETA_SETTINGS
        )
    if x <= 0.5:
        return SpecialValue(v1, e1 + abs(v1) * _EPS)

    if q < 1.0:
        v2, e2 = integrate(
            lambda s: (1.0 - s ** (1.0 / q)) ** (p - 1.0) / q,
            (1.0 - x) ** q,
            0.5**q,
            _IBETA_SETTINGS,
        )
    else:
        v2, e2 = integrate(
            lambda t: t ** (p - 1.0) * (1.0 - t) ** (q - 1.0), 0.5, x, _IBETA_SETTINGS
        )
    value = v1 + v2
    return SpecialValue(value, e1 + e2 + abs(value) * _EPS)
