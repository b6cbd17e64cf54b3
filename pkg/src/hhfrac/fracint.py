"""Riemann-Liouville fractional integrals and the unit-interval moment integrals.

Two routes are kept apart on purpose. ``rl_left``/``rl_right`` integrate in
the physical variable after absorbing the kernel (x - t)^(alpha-1) with the
substitution t = x - (x - a) s^(1/alpha). ``t_moment`` works in the
normalised variable t in [0, 1] and absorbs the weight t^(alpha-1) with
t = s^(1/alpha). Both give bounded integrands for smooth f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .quadrature import DEFAULT_SETTINGS, AccuracyError, QuadSettings, integrate
from .specfun import gamma

__all__ = [
    "FracParams",
    "QuadSettings",
    "AccuracyError",
    "rl_left",
    "rl_right",
    "t_moment",
    "moment_endpoints",
    "moment_as_rl",
    "kink_integral",
    "classical_integral",
]

Func = Callable[[np.ndarray], np.ndarray]
Orientation = Literal["A", "B", "C", "D"]


@dataclass(frozen=True)
class FracParams:
    alpha: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"endpoints must be finite, got a={self.a!r}, b={self.b!r}")
        if self.a > self.b:
            raise ValueError(f"need a <= b, got a={self.a!r}, b={self.b!r}")


def _inner_tol(s: QuadSettings, scale: float) -> float:
    return s.abs_tol / scale if scale > 0 else s.abs_tol


def rl_left(f: Func, p: FracParams, x: float, s: QuadSettings | None = None) -> float:
    """Left-sided integral J_{a+}^alpha f(x) for a <= x <= b."""
    s = s or DEFAULT_SETTINGS
    if not (p.a <= x <= p.b):
        raise ValueError(f"x={x!r} outside [{p.a!r}, {p.b!r}]")
    h = x - p.a
    if h == 0.0:
        return 0.0
    alpha = p.alpha
    scale = h**alpha / gamma(alpha + 1.0).value
    inv = 1.0 / alpha
    value, _ = integrate(
        lambda u: f(x - h * u**inv), 0.0, 1.0, s, _inner_tol(s, scale)
    )
    return scale * value


def rl_right(f: Func, p: FracParams, x: float, s: QuadSettings | None = None) -> float:
    """Right-sided integral J_{b-}^alpha f(x) for a <= x <= b."""
    s = s or DEFAULT_SETTINGS
    if not (p.a <= x <= p.b):
        raise ValueError(f"x={x!r} outside [{p.a!r}, {p.b!r}]")
    h = p.b - x
    if h == 0.0:
        return 0.0
    alpha = p.alpha
    scale = h**alpha / gamma(alpha + 1.0).value
    inv = 1.0 / alpha
    value, _ = integrate(
        lambda u: f(x + h * u**inv), 0.0, 1.0, s, _inner_tol(s, scale)
    )
    return scale * value


def moment_endpoints(a: float, b: float, m: float, orientation: Orientation) -> tuple[float, float]:
    """Points (c, d) with the orientation's argument written as c + t (d - c)."""
    if orientation == "A":  # t a + m (1 - t) b
        return m * b, a
    if orientation == "B":  # (1 - t) a + m t b
        return a, m * b
    if orientation == "C":  # t b + m (1 - t) a
        return m * a, b
    if orientation == "D":  # (1 - t) b + m t a
        return b, m * a
    raise ValueError(f"orientation must be one of A, B, C, D, got {orientation!r}")


def t_moment(
    f: Func,
    a: float,
    b: float,
    m: float,
    alpha: float,
    orientation: Orientation,
    s: QuadSettings | None = None,
) -> float:
    """int_0^1 t^(alpha-1) f(arg(t)) dt for one of the four affine arguments."""
    s = s or DEFAULT_SETTINGS
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    c, d = moment_endpoints(a, b, m, orientation)
    inv = 1.0 / alpha
    # int_0^1 t^(alpha-1) g(t) dt = (1/alpha) int_0^1 g(s^(1/alpha)) ds
    value, _ = integrate(
        lambda u: f(c + (d - c) * u**inv), 0.0, 1.0, s, s.abs_tol * alpha
    )
    return value / alpha


def moment_as_rl(
    f: Func,
    a: float,
    b: float,
    m: float,
    alpha: float,
    orientation: Orientation,
    s: QuadSettings | None = None,
) -> tuple[float, str] | None:
    """The same moment through a Riemann-Liouville integral.

    Returns ``(Gamma(alpha) / |d - c|^alpha * J, label)`` where J is the
    fractional integral of f anchored at c with the other limit at d, or
    None when c == d.
    """
    c, d = moment_endpoints(a, b, m, orientation)
    if c == d:
        return None
    g = gamma(alpha).value
    if d > c:
        j = rl_right(f, FracParams(alpha, c, d), c, s)
        label = f"J_{{{d!r}-}}^{alpha!r} f({c!r})"
    else:
        j = rl_left(f, FracParams(alpha, d, c), c, s)
        label = f"J_{{{d!r}+}}^{alpha!r} f({c!r})"
    return g / abs(d - c) ** alpha * j, label


def kink_integral(
    g: Func, alpha: float, s: QuadSettings | None = None, signed: bool = False
) -> float:
    """int_0^1 |(1-t)^alpha - t^alpha| g(t) dt, split at the kink t = 1/2.

    With ``signed=True`` the kernel keeps its sign, which is the integral
    appearing in the trapezoid identity.
    """
    s = s or DEFAULT_SETTINGS
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")

    def kernel(t: np.ndarray) -> np.ndarray:
        return ((1.0 - t) ** alpha - t**alpha) * g(t)

    half_tol = 0.5 * s.abs_tol
    lower, _ = integrate(kernel, 0.0, 0.5, s, half_tol)
    upper, _ = integrate(kernel, 0.5, 1.0, s, half_tol)
    return lower + upper if signed else lower - upper


def classical_integral(f: Func, lo: float, hi: float, s: QuadSettings | None = None) -> float:
    """Ordinary integral of f over [lo, hi] by the adaptive rule."""
    value, _ = integrate(f, lo, hi, s or DEFAULT_SETTINGS)
    return value
