"""Grid certification of the convexity classes the inequalities assume.

A certificate that fails carries a witness whose defect has been recomputed
through the scalar evaluation path, so "fails" is definitive. "holds" only
means no violation was found on the grid and around its worst point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .expr import FunctionSpec, differentiate, evaluate

DEFAULT_GRID_N = 64
DEFAULT_TOL = 1e-9
_ZOOM_POINTS = 7
_ZOOM_ROUNDS = 3


@dataclass(frozen=True)
class ClassParams:
    """Convexity-class parameters; ``p`` is the Hölder conjugate of ``q``."""

    m: float = 1.0
    alpha1: float = 1.0
    q: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.m <= 1.0):
            raise ValueError(f"m must lie in (0, 1], got {self.m!r}")
        if not (0.0 < self.alpha1 <= 1.0):
            raise ValueError(f"alpha1 must lie in (0, 1], got {self.alpha1!r}")
        if not (math.isfinite(self.q) and self.q >= 1.0):
            raise ValueError(f"q must be >= 1, got {self.q!r}")

    @property
    def p(self) -> Optional[float]:
        return self.q / (self.q - 1.0) if self.q > 1.0 else None


@dataclass(frozen=True)
class Certificate:
    holds: bool
    witness: Optional[tuple[float, ...]]
    max_violation: float
    grid_size: int
    kind: str = ""
    tolerance: float = DEFAULT_TOL

    @property
    def evidence(self) -> str:
        return "grid" if self.holds else "witness"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "holds": self.holds,
            "evidence": self.evidence,
            "witness": list(self.witness) if self.witness is not None else None,
            "max_violation": self.max_violation,
            "grid_size": self.grid_size,
            "tolerance": self.tolerance,
        }


def defect_at(f: FunctionSpec, x: float, y: float, t: float, m: float, alpha1: float = 1.0) -> float:
    """Defect f(tx + m(1-t)y) - [t^a f(x) + m(1 - t^a) f(y)] through the scalar path."""
    w = t**alpha1
    fz = evaluate(f, t * x + m * (1.0 - t) * y)
    return fz - (w * evaluate(f, x) + m * (1.0 - w) * evaluate(f, y))


def _grid_defects(f, xs, ys, ts, m, alpha1):
    """Defects on the product grid and the largest |f| value seen."""
    w = ts**alpha1
    fx = f(xs)
    fy = f(ys)
    z = ts[None, None, :] * xs[:, None, None] + m * (1.0 - ts[None, None, :]) * ys[None, :, None]
    fz = f(z.ravel()).reshape(z.shape)
    rhs = w[None, None, :] * fx[:, None, None] + m * (1.0 - w[None, None, :]) * fy[None, :, None]
    magnitude = max(float(np.max(np.abs(fx))), float(np.max(np.abs(fy))), float(np.max(np.abs(fz))))
    return fz - rhs, magnitude


def _refine(f, start, steps, bounds, m, alpha1):
    """Zoom search for a larger defect around ``start`` (a grid point)."""
    centre = np.array(start, dtype=float)
    best = defect_at(f, *centre, m, alpha1)
    half = np.array(steps, dtype=float)
    for _ in range(_ZOOM_ROUNDS):
        axes = []
        for k in range(3):
            lo = max(bounds[k][0], centre[k] - half[k])
            hi = min(bounds[k][1], centre[k] + half[k])
            axes.append(np.linspace(lo, hi, _ZOOM_POINTS))
        d, _ = _grid_defects(f, axes[0], axes[1], axes[2], m, alpha1)
        i, j, k = np.unravel_index(int(np.argmax(d)), d.shape)
        # move only for a gain beyond rounding, so exact grid witnesses stay put
        if d[i, j, k] > best + 1e-12 * max(1.0, abs(best)):
            best = float(d[i, j, k])
            centre = np.array([axes[0][i], axes[1][j], axes[2][k]])
        half = half / 4.0
    return centre, best


def _certify(
    f: FunctionSpec, B: float, m: float, alpha1: float, grid_n: int, tol: float, kind: str, lo: float = 0.0
) -> Certificate:
    if not (B > lo and math.isfinite(B)):
        raise ValueError(f"B must be finite and exceed {lo!r}, got {B!r}")
    if not (0.0 < m <= 1.0):
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n!r}")
    xs = np.linspace(lo, B, grid_n)
    ts = np.linspace(0.0, 1.0, grid_n)
    d, magnitude = _grid_defects(f, xs, xs, ts, m, alpha1)
    # absolute for O(1) values, relative beyond
    tol_eff = tol * max(1.0, magnitude)
    i, j, k = np.unravel_index(int(np.argmax(d)), d.shape)
    grid_worst = float(d[i, j, k])
    step_x = (B - lo) / (grid_n - 1)
    step_t = 1.0 / (grid_n - 1)
    point, refined = _refine(
        f,
        (xs[i], xs[j], ts[k]),
        (step_x, step_x, step_t),
        ((lo, B), (lo, B), (0.0, 1.0)),
        m,
        alpha1,
    )
    worst = max(grid_worst, refined)
    candidates = [tuple(float(v) for v in point), (float(xs[i]), float(xs[j]), float(ts[k]))]
    for x, y, t in candidates:
        if worst > tol_eff and defect_at(f, x, y, t, m, alpha1) > tol_eff:
            return Certificate(False, (x, y, t), worst, grid_n**3, kind, tol_eff)
    return Certificate(True, None, max(0.0, worst), grid_n**3, kind, tol_eff)


def certify_m_convex(
    f: FunctionSpec, B: float, m: float, grid_n: int = DEFAULT_GRID_N, tol: float = DEFAULT_TOL
) -> Certificate:
    """Check f(tx + m(1-t)y) <= t f(x) + m(1-t) f(y) on [0, B]^2 x [0, 1].

    The tolerance is scaled by max(1, largest |f| on the grid), so ``tol``
    acts as an absolute tolerance for O(1) values and a relative one beyond.
    """
    return _certify(f, B, m, 1.0, grid_n, tol, f"m-convex(m={m!r}) on [0, {B!r}]")


def certify_convex(
    f: FunctionSpec, a: float, b: float, grid_n: int = DEFAULT_GRID_N, tol: float = DEFAULT_TOL
) -> Certificate:
    """Ordinary convexity on [a, b] (the m = 1, alpha1 = 1 certificate)."""
    return _certify(f, b, 1.0, 1.0, grid_n, tol, f"convex on [{a!r}, {b!r}]", lo=a)


def certify_alpha_m_convex(
    f: FunctionSpec,
    B: float,
    params: ClassParams,
    grid_n: int = DEFAULT_GRID_N,
    tol: float = DEFAULT_TOL,
) -> Certificate:
    return _certify(
        f,
        B,
        params.m,
        params.alpha1,
        grid_n,
        tol,
        f"(alpha1={params.alpha1!r}, m={params.m!r})-convex on [0, {B!r}]",
    )


def certify_decreasing_abs_derivative(
    f: FunctionSpec, a: float, b: float, grid_n: int = DEFAULT_GRID_N, tol: float = DEFAULT_TOL
) -> Certificate:
    """Check |f'(x_i)| >= |f'(x_{i+1})| - tol on a uniform grid over [a, b]."""
    fp = differentiate(f)
    xs = np.linspace(a, b, grid_n)
    v = np.abs(evaluate(fp, xs))
    rise = v[1:] - v[:-1]
    tol_eff = tol * max(1.0, float(np.max(v)))
    kind = f"|f'| decreasing on [{a!r}, {b!r}]"
    worst = float(max(0.0, np.max(rise))) if rise.size else 0.0
    bad = rise > tol_eff
    if bad.any():
        i = int(np.argmax(bad))
        return Certificate(False, (float(xs[i]), float(xs[i + 1])), worst, grid_n, kind, tol_eff)
    return Certificate(True, None, worst, grid_n, kind, tol_eff)


def certify_nonnegative(
    f: FunctionSpec, a: float, b: float, grid_n: int = DEFAULT_GRID_N, tol: float = DEFAULT_TOL
) -> Certificate:
    xs = np.linspace(a, b, grid_n)
    v = evaluate(f, xs)
    tol_eff = tol * max(1.0, float(np.max(np.abs(v))))
    kind = f"f >= 0 on [{a!r}, {b!r}]"
    worst = float(max(0.0, -np.min(v)))
    if worst > tol_eff:
        i = int(np.argmin(v))
        return Certificate(False, (float(xs[i]),), worst, grid_n, kind, tol_eff)
    return Certificate(True, None, worst, grid_n, kind, tol_eff)
