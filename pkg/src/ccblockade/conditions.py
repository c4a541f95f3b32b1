"""Unconventional-blockade optimality conditions and sweep extremum helpers.

C20 = 0 (equal detunings D, equal decay rates kappa) is equivalent to the
real system

    R = 4J^2 K + 8K^3 + 28K^2 D + 28K D^2 + 8D^3 - 7K kappa^2 - 6D kappa^2 = 0
    I = 14K^2 + 28K D + 12D^2 - kappa^2 = 0

Only real solutions are searched for; the complex pair of the system does
not correspond to physical parameters and is out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import PreconditionError

SCAN_SAMPLES = 20000
SPAN_FACTOR = 5.0
DEDUP_REL = 1e-9


@dataclass(frozen=True)
class OptimalitySystem:
    hop: float
    kappa: float = 1.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise PreconditionError(f"kappa must be > 0, got {self.kappa}")


@dataclass(frozen=True)
class OptimalSolution:
    kerr: float
    delta: float
    residual_r: float
    residual_i: float


def optimality_residuals(sys: OptimalitySystem, kerr: float, delta: float) -> tuple[float, float]:
    return (
        float(_kernels.residual_r(sys.hop, kerr, delta, sys.kappa)),
        float(_kernels.residual_i(kerr, delta, sys.kappa)),
    )


def residual_scale(sys: OptimalitySystem, kerr: float) -> float:
    """Acceptance scale for |R| and |I|: max(1, |4 J^2 K|)."""
    return max(1.0, abs(4.0 * sys.hop**2 * kerr))


def solve_optimal_conditions(sys: OptimalitySystem, samples: int = SCAN_SAMPLES) -> list[OptimalSolution]:
    """All real (K, D) with R = I = 0, sorted by |D|.

    I = 0 is a conic whose two branches K_+(D), K_-(D) are real for every D
    (the discriminant 112 D^2 + 56 kappa^2 never vanishes), so R is scanned
    along each branch and sign changes are refined by bisection.
    """
    span = SPAN_FACTOR * max(abs(sys.hop), sys.kappa)
    deltas = np.linspace(-span, span, samples)
    found = []
    for branch in (+1, -1):
        ks, rs = _kernels.conic_scan(sys.hop, sys.kappa, deltas, branch)
        exact = np.flatnonzero(rs == 0.0)
        change = np.flatnonzero(np.sign(rs[:-1]) * np.sign(rs[1:]) < 0)
        roots = [float(deltas[i]) for i in exact]
        for i in change:
            # ftol 0: shrink the bracket to floating-point resolution
            roots.append(_kernels.conic_bisect(sys.hop, sys.kappa, branch, deltas[i], deltas[i + 1], 0.0))
        for d in roots:
            k = float(_kernels.conic_kerr(d, sys.kappa, branch))
            r, i = optimality_residuals(sys, k, d)
            found.append(OptimalSolution(k, d, r, i))
    unique = []
    for s in sorted(found, key=lambda s: (abs(s.delta), s.delta)):
        if any(_close(s, u) for u in unique):
            continue
        unique.append(s)
    return unique


def _close(s, u):
    tol = DEDUP_REL * max(1.0, abs(s.delta), abs(s.kerr))
    return abs(s.delta - u.delta) <= tol and abs(s.kerr - u.kerr) <= tol


def is_mirror_closed(solutions, rtol: float = 1e-9) -> bool:
    for s in solutions:
        tol_d = rtol * max(1.0, abs(s.delta))
        tol_k = rtol * max(1e-12, abs(s.kerr))
        if not any(abs(u.delta + s.delta) <= tol_d and abs(u.kerr + s.kerr) <= tol_k for u in solutions):
            return False
    return True


def locate_g2_minima(sweep) -> list[tuple[float, float]]:
    """Strict interior local minima of a sweep of ``(delta, g2)`` pairs.

    A flat bottom of equal values is reported once, at its smallest delta.
    """
    arr = np.asarray(sweep, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 3 or arr.shape[1] != 2:
        raise PreconditionError("sweep must be a sequence of at least three (delta, g2) pairs")
    x, y = arr[:, 0], arr[:, 1]
    if np.any(np.diff(x) <= 0):
        raise PreconditionError("sweep must be sorted by strictly increasing delta")
    out = []
    i = 1
    n = len(y)
    while i < n - 1:
        if y[i] < y[i - 1]:
            j = i
            while j + 1 < n and y[j + 1] == y[i]:
                j += 1
            if j + 1 < n and y[j + 1] > y[i]:
                out.append((float(x[i]), float(y[i])))
            i = j + 1
        else:
            i += 1
    return out


def locate_maxima(x, y) -> list[tuple[float, float]]:
    """Strict interior local maxima (same rules as ``locate_g2_minima``)."""
    return [(d, -v) for d, v in locate_g2_minima(np.column_stack([x, -np.asarray(y, dtype=float)]))]


def has_dip(x, y, window: float, ratio: float = 0.1) -> bool:
    """True if some interior local minimum of ``y`` lies below ``ratio`` times
    the largest value of ``y`` within ``window`` on either side of it."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for xm, ym in locate_g2_minima(np.column_stack([x, y])):
        left = y[(x >= xm - window) & (x < xm)]
        right = y[(x > xm) & (x <= xm + window)]
        if left.size and right.size and ym < ratio * min(left.max(), right.max()):
            return True
    return False
