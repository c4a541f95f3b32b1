"""Truncated Fock-space algebra for one and two bosonic modes.

Operators are plain dense ``complex128`` numpy arrays. The composite basis
of two modes is always a-major: ``|m, n>`` sits at ``m * (n_max_b + 1) + n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import DimensionMismatchError, InvalidDimensionError, InvalidStateError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class Truncation:
    n_max_a: int
    n_max_b: int

    def __post_init__(self):
        if int(self.n_max_a) < 1 or int(self.n_max_b) < 1:
            raise InvalidDimensionError(
                f"photon-number cutoffs must be >= 1, got ({self.n_max_a}, {self.n_max_b})"
            )

    @property
    def dim_a(self) -> int:
        return self.n_max_a + 1

    @property
    def dim_b(self) -> int:
        return self.n_max_b + 1

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def index(self, m: int, n: int) -> int:
        return m * self.dim_b + n

    def grown(self, step: int = 1) -> "Truncation":
        return Truncation(self.n_max_a + step, self.n_max_b + step)

    def mode_ops(self):
        """Return ``(a, b)`` embedded in the composite space (cached, read-only)."""
        return _mode_ops(self.dim_a, self.dim_b)


@lru_cache(maxsize=64)
def _mode_ops(dim_a, dim_b):
    a = tensor(annihilation_op(dim_a), np.eye(dim_b))
    b = tensor(np.eye(dim_a), annihilation_op(dim_b))
    a.flags.writeable = False
    b.flags.writeable = False
    return a, b


def annihilation_op(dim: int) -> np.ndarray:
    if dim < 2:
        raise InvalidDimensionError(f"ladder operator needs dim >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation_op(dim: int) -> np.ndarray:
    return adjoint(annihilation_op(dim))


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def adjoint(x: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(x)).T


def tensor(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise InvalidDimensionError("tensor expects square matrices")
    return np.kron(x, y)


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def basis_ket(t: Truncation, m: int, n: int) -> np.ndarray:
    ket = np.zeros(t.dim, dtype=complex)
    ket[t.index(m, n)] = 1.0
    return ket


@dataclass(frozen=True)
class DensityMatrix:
    """Validated two-mode density matrix.

    Construction checks Hermiticity, unit trace and numerical positivity;
    pass ``check=False`` to skip (used for intermediate perturbative tables).
    """

    entries: np.ndarray
    truncation: Truncation
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", rho)
        if rho.shape != (self.truncation.dim, self.truncation.dim):
            raise DimensionMismatchError(
                f"matrix shape {rho.shape} does not match truncation dim {self.truncation.dim}"
            )
        if self.check:
            validate_density_matrix(rho)

    @property
    def dim(self) -> int:
        return self.truncation.dim

    def element(self, m: int, n: int, mp: int, np_: int) -> complex:
        """<m, n| rho |mp, np_>."""
        t = self.truncation
        return complex(self.entries[t.index(m, n), t.index(mp, np_)])

    def population(self, m: int, n: int) -> float:
        return self.element(m, n, m, n).real


def validate_density_matrix(rho, herm_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL, pos_tol=POSITIVITY_TOL):
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > herm_tol:
        raise InvalidStateError(f"not Hermitian: max |rho - rho^+| = {herm_err:.3e}")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > trace_tol:
        raise InvalidStateError(f"trace differs from 1 by {trace_err:.3e}")
    min_eig = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if min_eig < -pos_tol:
        raise InvalidStateError(f"negative eigenvalue {min_eig:.3e}")


def expectation(x: np.ndarray, rho) -> complex:
    mat = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if x.shape != mat.shape:
        raise DimensionMismatchError(f"operator {x.shape} vs state {mat.shape}")
    # trace(X rho) without forming the product
    return complex(np.sum(x * mat.T))


def thermal_populations(nbar: float, dim: int) -> np.ndarray:
    """Bose-Einstein photon-number distribution, renormalised on ``dim`` levels."""
    if nbar == 0:
        p = np.zeros(dim)
        p[0] = 1.0
        return p
    x = nbar / (1.0 + nbar)
    p = x ** np.arange(dim)
    return p / p.sum()


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    n = np.arange(dim)
    norms = np.sqrt([float(factorial(k)) for k in n])
    amps = alpha ** n / norms
    return amps / np.linalg.norm(amps)


def product_state(rho_a: np.ndarray, rho_b: np.ndarray, t: Truncation) -> DensityMatrix:
    return DensityMatrix(np.kron(rho_a, rho_b), t)


def pure_state(ket: np.ndarray, t: Truncation) -> DensityMatrix:
    ket = np.asarray(ket, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    return DensityMatrix(np.outer(ket, ket.conj()), t)
