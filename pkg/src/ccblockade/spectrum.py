"""Closed-form eigensystems of the undriven Hamiltonian for N = 0, 1, 2 excitations.

The two-excitation block, in the basis ``|0,2>, |1,1>, |2,0>``, is::

    [[2 db + 4K, sqrt2 J,       0      ],
     [sqrt2 J,   da + db + K,   sqrt2 J],
     [0,         sqrt2 J,       2 da   ]]

whose characteristic cubic is solved with the trigonometric (three real
roots) formula.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._roots import bisect
from .errors import DegenerateCubicError, RootNotFoundError
from .model import SystemParams

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)
# |arccos argument| may exceed 1 by this much (rounding) before we refuse
ARCCOS_SLACK = 1e-9
# relative size of D (against scale**2) below which the cubic counts as degenerate
DEGENERATE_D_REL = 1e-14
# N_2s below this (relative to scale**6) means the coefficient formula collapses
NORM_FLOOR_REL = 1e-24
SCAN_SAMPLES = 4000
ROOT_TOL = 1e-10
POLISH_STEPS = 3


@dataclass(frozen=True)
class Eigensystem1:
    e_plus: float
    e_minus: float
    theta: float
    c01_plus: float
    c10_plus: float
    c01_minus: float
    c10_minus: float

    def vectors(self) -> np.ndarray:
        """Columns are |e1+>, |e1->, in the basis (|0,1>, |1,0>)."""
        return np.array([[self.c01_plus, self.c01_minus], [self.c10_plus, self.c10_minus]])


@dataclass(frozen=True)
class CubicAux:
    a_coef: float
    b_coef: float
    c_coef: float
    d_coef: float
    e_coef: float
    alpha: float
    norms: tuple


@dataclass(frozen=True)
class Eigensystem2:
    """Energies ordered (E2-, E20, E2+); ``coeffs[s]`` is (C02, C11, C20) of branch s."""

    energies: tuple
    coeffs: np.ndarray
    aux: CubicAux | None
    numeric_fallback: bool = False

    @property
    def e_minus(self):
        return self.energies[0]

    @property
    def e_zero(self):
        return self.energies[1]

    @property
    def e_plus(self):
        return self.energies[2]

    def vectors(self) -> np.ndarray:
        """Columns are the eigenvectors in the basis (|0,2>, |1,1>, |2,0>)."""
        return np.asarray(self.coeffs).T


def single_excitation_eigensystem(p: SystemParams) -> Eigensystem1:
    mean = 0.5 * (p.delta_a + p.delta_b + p.kerr)
    split = p.delta_b - p.delta_a + p.kerr
    root = 0.5 * np.hypot(split, 2.0 * p.hop)
    theta = 0.5 * np.arctan2(2.0 * p.hop, split)
    c, s = np.cos(theta), np.sin(theta)
    return Eigensystem1(
        e_plus=mean + root,
        e_minus=mean - root,
        theta=theta,
        c01_plus=c,
        c10_plus=s,
        c01_minus=-s,
        c10_minus=c,
    )


def two_excitation_matrix(p: SystemParams) -> np.ndarray:
    j2 = SQRT2 * p.hop
    return np.array(
        [
            [2 * p.delta_b + 4 * p.kerr, j2, 0.0],
            [j2, p.delta_a + p.delta_b + p.kerr, j2],
            [0.0, j2, 2 * p.delta_a],
        ]
    )


def cubic_coefficients(da, db, kerr, hop):
    """A, B, C of the characteristic cubic and the derived D, E (array friendly)."""
    j2 = hop * hop
    a = -5 * kerr - 3 * da - 3 * db
    b = -4 * j2 + 4 * kerr**2 + 14 * kerr * da + 2 * da**2 + 6 * kerr * db + 8 * da * db + 2 * db**2
    c = (
        8 * j2 * kerr
        + 4 * j2 * da
        - 8 * kerr**2 * da
        - 8 * kerr * da**2
        + 4 * j2 * db
        - 12 * kerr * da * db
        - 4 * da**2 * db
        - 4 * da * db**2
    )
    d = b - a * a / 3.0
    e = c + 2.0 * a**3 / 27.0 - a * b / 3.0
    return a, b, c, d, e


def _scale(da, db, kerr, hop):
    return np.maximum.reduce(
        [np.abs(2 * db + 4 * kerr), np.abs(da + db + kerr), np.abs(2 * da), SQRT2 * np.abs(hop)]
    )


def cubic_energies(da, db, kerr, hop):
    """Vectorised closed-form (E2-, E20, E2+) plus a degeneracy mask.

    Where the mask is True the returned energies are meaningless.
    """
    da, db, kerr, hop = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (da, db, kerr, hop)))
    a, _, _, d, e = cubic_coefficients(da, db, kerr, hop)
    scale = _scale(da, db, kerr, hop)
    degenerate = d >= -DEGENERATE_D_REL * np.maximum(scale, 1e-300) ** 2
    d_safe = np.where(degenerate, -1.0, d)
    root = np.sqrt(-3.0 * d_safe)
    arg = -3.0 * e * root / (2.0 * d_safe**2)
    degenerate |= np.abs(arg) > 1.0 + ARCCOS_SLACK
    alpha = np.arccos(np.clip(arg, -1.0, 1.0))
    c3, s3 = np.cos(alpha / 3.0), np.sin(alpha / 3.0)
    e_minus = -(a + root * (c3 + SQRT3 * s3)) / 3.0
    e_zero = -(a + root * (c3 - SQRT3 * s3)) / 3.0
    e_plus = -(a - 2.0 * root * c3) / 3.0
    return np.stack([e_minus, e_zero, e_plus], axis=-1), alpha, degenerate


def _numeric_block(p: SystemParams):
    vals, vecs = np.linalg.eigh(two_excitation_matrix(p))
    return vals, vecs


def _fix_sign(v):
    # deterministic sign: largest-magnitude component positive
    k = np.argmax(np.abs(v))
    return v if v[k] >= 0 else -v


def _char_det(p: SystemParams, en: float):
    """det(H2 - E) and its E-derivative, expanded along the tridiagonal."""
    u = 2 * p.delta_b + 4 * p.kerr - en
    m = p.delta_a + p.delta_b + p.kerr - en
    w = 2 * p.delta_a - en
    h2 = 2.0 * p.hop * p.hop
    det = u * (m * w - h2) - h2 * w
    deriv = -(m * w - h2) - u * (m + w) + h2
    return det, deriv


def _polish(p: SystemParams, en: float, steps: int = POLISH_STEPS) -> float:
    # near a double root the arccos form loses digits; Newton on the
    # determinant recovers them and is rejected whenever it does not help
    f, df = _char_det(p, en)
    for _ in range(steps):
        if f == 0.0 or df == 0.0:
            break
        trial = en - f / df
        ft, dft = _char_det(p, trial)
        if abs(ft) >= abs(f):
            break
        en, f, df = trial, ft, dft
    return en


def two_excitation_eigensystem(p: SystemParams, allow_fallback: bool = False) -> Eigensystem2:
    energies, alpha, degenerate = cubic_energies(p.delta_a, p.delta_b, p.kerr, p.hop)
    if bool(degenerate):
        if not allow_fallback:
            raise DegenerateCubicError(
                "two-excitation cubic is degenerate (D >= 0 or |arccos arg| > 1); "
                "use allow_fallback=True for the numeric path"
            )
        warnings.warn("degenerate two-excitation cubic, using dense diagonalisation", RuntimeWarning)
        vals, vecs = _numeric_block(p)
        coeffs = np.array([_fix_sign(vecs[:, k]) for k in range(3)])
        return Eigensystem2(tuple(float(v) for v in vals), coeffs, None, numeric_fallback=True)

    energies = [_polish(p, float(x)) for x in energies]
    if not energies[0] <= energies[1] <= energies[2]:
        raise AssertionError(f"branch ordering violated: {energies}")

    a, b, c, d, e = (float(x) for x in cubic_coefficients(p.delta_a, p.delta_b, p.kerr, p.hop))
    j = p.hop
    upper = 2 * p.delta_b + 4 * p.kerr
    scale = float(_scale(p.delta_a, p.delta_b, p.kerr, p.hop))
    coeffs = np.empty((3, 3))
    norms = []
    used_fallback = False
    for s, en in enumerate(energies):
        x = en - 2 * p.delta_a
        y = upper - en
        norm = x * x * (2 * j * j + y * y) + 2 * j * j * y * y
        norms.append(norm)
        if norm <= NORM_FLOOR_REL * max(scale, 1e-300) ** 6:
            # coefficient formula collapses (e.g. J = 0); eigh keeps degenerate
            # pairs orthogonal, and its ascending order matches the branch order
            coeffs[s] = _fix_sign(_numeric_block(p)[1][:, s])
            used_fallback = True
            continue
        inv = 1.0 / np.sqrt(norm)
        coeffs[s] = (-SQRT2 * j * x * inv, x * y * inv, SQRT2 * j * y * inv)
    aux = CubicAux(a, b, c, d, e, float(alpha), tuple(norms))
    return Eigensystem2(tuple(energies), coeffs, aux, numeric_fallback=used_fallback)


def conventional_resonance_detunings(kerr: float, hop: float) -> tuple[float, float]:
    """Single-photon resonances E1-(D) = 0 and E1+(D) = 0 for equal detunings D.

    Returns ``(delta_minus_branch, delta_plus_branch)``.
    """
    root = np.hypot(kerr, 2.0 * hop)
    return -(kerr - root) / 2.0, -(kerr + root) / 2.0


def _branch_energies(deltas, kerr, hop):
    energies, _, degenerate = cubic_energies(deltas, deltas, kerr, hop)
    if np.any(degenerate):
        bad = np.flatnonzero(degenerate)
        mats = np.zeros((bad.size, 3, 3))
        j2 = SQRT2 * hop
        d = np.asarray(deltas, dtype=float)[bad]
        mats[:, 0, 0] = 2 * d + 4 * kerr
        mats[:, 1, 1] = 2 * d + kerr
        mats[:, 2, 2] = 2 * d
        mats[:, 0, 1] = mats[:, 1, 0] = mats[:, 1, 2] = mats[:, 2, 1] = j2
        energies[bad] = np.linalg.eigvalsh(mats)
    return energies


def two_photon_resonance_detunings(kerr: float, hop: float, samples: int = SCAN_SAMPLES):
    """Equal detunings D at which a two-excitation level E2s(D) crosses zero, sorted."""
    half = abs(kerr) + 3.0 * np.hypot(kerr, 2.0 * hop)
    if half == 0.0:
        half = 1.0
    grid = np.linspace(-half, half, samples)
    values = _branch_energies(grid, kerr, hop)
    roots = []
    for s in range(3):
        f = values[:, s]
        hits = np.flatnonzero(f == 0.0)
        if hits.size:
            roots.append(float(grid[hits[0]]))
            continue
        change = np.flatnonzero(np.sign(f[:-1]) != np.sign(f[1:]))
        if change.size == 0:
            raise RootNotFoundError(
                f"branch {s}: no sign change of E2s on [{-half}, {half}]", interval=(-half, half)
            )
        k = change[0]

        def branch(x, s=s):
            return float(_branch_energies(np.array([x]), kerr, hop)[0, s])

        roots.append(bisect(branch, grid[k], grid[k + 1], ftol=ROOT_TOL))
    return tuple(sorted(roots))
