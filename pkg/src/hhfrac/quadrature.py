"""Adaptive composite Gauss-Legendre quadrature.

Panels are refined in batches: every round evaluates all intervals chosen
for bisection with a single vectorised call of the integrand, so the Python
overhead grows with the refinement depth rather than the panel count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

Integrand = Callable[[np.ndarray], np.ndarray]


class AccuracyError(ArithmeticError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, estimate: float, residual: float, message: str = ""):
        self.estimate = estimate
        self.residual = residual
        super().__init__(
            message or f"quadrature did not converge: estimate={estimate!r}, residual={residual!r}"
        )


@dataclass(frozen=True)
class QuadSettings:
    abs_tol: float = 1e-10
    max_subdivisions: int = 2000
    panel_order: int = 15

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and np.isfinite(self.abs_tol)):
            raise ValueError(f"abs_tol must be positive and finite, got {self.abs_tol!r}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions!r}")
        if self.panel_order < 2:
            raise ValueError(f"panel_order must be >= 2, got {self.panel_order!r}")

    def with_tol(self, abs_tol: float) -> QuadSettings:
        return QuadSettings(abs_tol, self.max_subdivisions, self.panel_order)


DEFAULT_SETTINGS = QuadSettings()


@lru_cache(maxsize=None)
def _rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _panels(func: Integrand, lo: np.ndarray, hi: np.ndarray, order: int) -> np.ndarray:
    """Gauss-Legendre estimate on each [lo_i, hi_i]; one call to ``func``."""
    nodes, weights = _rule(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = np.asarray(func(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ weights)


def integrate(
    func: Integrand,
    lo: float,
    hi: float,
    settings: QuadSettings | None = None,
    abs_tol: float | None = None,
) -> tuple[float, float]:
    """Integrate ``func`` over [lo, hi]; returns ``(value, error_estimate)``.

    ``func`` must accept and return 1-d float arrays. The error of a panel is
    the difference between its single-panel estimate and the sum over its two
    halves; the halves are kept as the value. Panels whose error exceeds
    their share ``tol / N`` are bisected until the summed error is below
    ``tol``.

    Raises AccuracyError when ``max_subdivisions`` bisections were not
    enough, or when the integrand produced non-finite values.
    """
    s = settings or DEFAULT_SETTINGS
    tol = s.abs_tol if abs_tol is None else abs_tol
    lo = float(lo)
    hi = float(hi)
    if lo == hi:
        return 0.0, 0.0
    if hi < lo:
        value, err = integrate(func, hi, lo, s, tol)
        return -value, err

    order = s.panel_order
    whole = _panels(func, np.array([lo]), np.array([hi]), order)
    los = np.array([lo])
    his = np.array([hi])
    # each interval is evaluated as two halves; `whole` is its coarse estimate
    splits = 0
    pool_lo: list[np.ndarray] = []
    pool_hi: list[np.ndarray] = []
    pool_left: list[np.ndarray] = []
    pool_right: list[np.ndarray] = []
    pool_err: list[np.ndarray] = []

    while True:
        mids = 0.5 * (los + his)
        halves = _panels(func, np.concatenate([los, mids]), np.concatenate([mids, his]), order)
        k = los.size
        left, right = halves[:k], halves[k:]
        with np.errstate(invalid="ignore"):
            # inf - inf is reported below as a non-finite estimate
            err = np.abs(whole - (left + right))
        pool_lo.append(los)
        pool_hi.append(his)
        pool_left.append(left)
        pool_right.append(right)
        pool_err.append(err)

        all_lo = np.concatenate(pool_lo)
        all_hi = np.concatenate(pool_hi)
        all_left = np.concatenate(pool_left)
        all_right = np.concatenate(pool_right)
        all_err = np.concatenate(pool_err)
        estimate = float(np.sum(all_left + all_right))
        total = float(np.sum(all_err))
        if not (np.isfinite(estimate) and np.isfinite(total)):
            raise AccuracyError(estimate, total, "integrand produced non-finite values")
        if total <= tol:
            return estimate, total

        pick = all_err > tol / all_err.size
        n_pick = int(np.count_nonzero(pick))
        splits += n_pick
        if splits > s.max_subdivisions:
            raise AccuracyError(estimate, total)

        keep = ~pick
        pool_lo = [all_lo[keep]]
        pool_hi = [all_hi[keep]]
        pool_left = [all_left[keep]]
        pool_right = [all_right[keep]]
        pool_err = [all_err[keep]]

        p_lo, p_hi = all_lo[pick], all_hi[pick]
        p_mid = 0.5 * (p_lo + p_hi)
        if np.any((p_mid <= p_lo) | (p_mid >= p_hi)):
            raise AccuracyError(estimate, total, "interval width underflow during bisection")
        los = np.concatenate([p_lo, p_mid])
        his = np.concatenate([p_mid, p_hi])
        whole = np.concatenate([all_left[pick], all_right[pick]])
