"""Thermal master equation: Liouvillian, steady state and g2(0).

The generator is

    drho/dt = i[rho, H] + sum_o gamma_o (2 o rho o^+ - o^+ o rho - rho o^+ o)

with gamma = kappa_a (nbar_a + 1) / 2 for o = a, kappa_a nbar_a / 2 for
o = a^+, and likewise for mode b. Superoperators are stored as scipy CSR
matrices acting on column-stacked density matrices.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.constants as const
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _exact, _kernels
from .errors import (
    ConvergenceError,
    InvalidStateError,
    NonUniqueSteadyStateError,
    ParameterError,
    UndefinedCorrelationError,
)
from .fock import (
    POSITIVITY_TOL,
    DensityMatrix,
    Truncation,
    adjoint,
    expectation,
    validate_density_matrix,
)
from .model import SystemParams, build_hamiltonian, build_jc_hamiltonian, jc_operators, jc_truncation

RESIDUAL_TOL = 1e-9
OCCUPATION_FLOOR = 1e-14
CONVERGENCE_RTOL = 1e-6
MAX_CUTOFF = 12
DEFAULT_TRUNCATION = Truncation(3, 3)
EQUILIBRATION_PASSES = 3
REFINEMENT_MAX = 40
REFINEMENT_TOL = 1e-15  # per element, relative to sqrt(rho_ii rho_jj)
POPULATION_FLOOR = 1e-200


@dataclass(frozen=True)
class BathSpec:
    nbar_a: float = 0.0
    nbar_b: float = 0.0

    def __post_init__(self):
        if self.nbar_a < 0 or self.nbar_b < 0:
            raise ParameterError("thermal occupations must be >= 0")


@dataclass(frozen=True)
class Superoperator:
    entries: sp.csr_matrix
    truncation: Truncation

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dense(self) -> np.ndarray:
        return self.entries.toarray()

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = rho.shape[0]
        return (self.entries @ vec(rho)).reshape((d, d), order="F")


@dataclass(frozen=True)
class SteadyStateReport:
    rho: DensityMatrix
    residual: float
    truncation_used: Truncation
    converged: bool


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(x: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(x).reshape((d, d), order="F")


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode at angular frequency ``omega`` (rad/s)."""
    if omega <= 0:
        raise ParameterError(f"omega must be > 0, got {omega}")
    if temperature < 0:
        raise ParameterError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    x = const.hbar * omega / (const.k * temperature)
    return float(1.0 / np.expm1(x))


def collapse_operators(p: SystemParams, t: Truncation) -> list[np.ndarray]:
    """Jump operators sqrt(rate) * o, with rate = 2 * gamma_o."""
    a, b = t.mode_ops()
    ops = []
    for op, kappa, nbar in ((a, p.kappa_a, p.nbar_a), (b, p.kappa_b, p.nbar_b)):
        ops.append(np.sqrt(kappa * (nbar + 1.0)) * op)
        if nbar > 0:
            ops.append(np.sqrt(kappa * nbar) * adjoint(op))
    return ops


def liouvillian_from(h: np.ndarray, jumps, t: Truncation) -> Superoperator:
    return Superoperator(_kernels.assemble_liouvillian(h, jumps), t)


def build_liouvillian(p: SystemParams, t: Truncation) -> Superoperator:
    return liouvillian_from(build_hamiltonian(p, t), collapse_operators(p, t), t)


def trace_row(d: int) -> np.ndarray:
    row = np.zeros(d * d, dtype=complex)
    row[np.arange(d) * (d + 1)] = 1.0
    return row


def _scales(pops: np.ndarray) -> np.ndarray:
    pops = np.maximum(np.abs(pops), POPULATION_FLOOR)
    return np.sqrt(pops / pops.max())


def constrained_system(entries: sp.spmatrix, d: int) -> sp.csr_matrix:
    """``L`` with its first row (the equation for rho[0, 0]) replaced by the trace row."""
    n = d * d
    keep = sp.diags(np.r_[0.0, np.ones(n - 1)])
    diag = np.arange(d) * (d + 1)
    trace = sp.csr_matrix((np.ones(d, dtype=complex), (np.zeros(d, dtype=int), diag)), shape=(n, n))
    return (keep @ entries + trace).tocsr()


def _scaled_lu(c: sp.csr_matrix, s: np.ndarray):
    """LU of ``W C D`` with ``D = diag(s (x) s)`` and ``W = D^-1`` except on the trace row."""
    scale = np.kron(s, s)
    w = 1.0 / scale
    w[0] = 1.0
    system = (sp.diags(w) @ c @ sp.diags(scale)).tocsc()
    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            lu = spla.splu(system)
        except (spla.MatrixRankWarning, RuntimeError) as exc:
            raise NonUniqueSteadyStateError(f"constrained Liouvillian is singular: {exc}") from exc
    return lambda r: scale * lu.solve(w * r)


def _element_bounds(x: np.ndarray, d: int) -> np.ndarray:
    q = np.sqrt(np.maximum(np.abs(x[np.arange(d) * (d + 1)].real), POPULATION_FLOOR))
    return np.kron(q, q)


def steady_state(L: Superoperator, check: bool = True) -> SteadyStateReport:
    """Null vector of ``L`` normalised to unit trace.

    The equation for rho[0, 0] is replaced by the trace condition. The
    square system is factorised once in double precision and the solution
    is polished by iterative refinement with exactly computed residuals
    until every element has settled to ``REFINEMENT_TOL`` of its positivity
    bound sqrt(rho_ii rho_jj). Under weak driving the populations span tens
    of decades and interference can cancel leading terms, so small elements
    need this relative rather than absolute accuracy. If refinement stalls
    the system is re-factorised with unknowns rescaled by the current
    populations, rho[i, j] = s_i s_j sigma[i, j].
    """
    t = L.truncation
    d = t.dim
    n = d * d
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0
    c = constrained_system(L.entries, d)
    exact = _exact.ExactOperator(c)
    x = _exact.FixedVector(n)
    s = np.ones(d)
    done = False
    for _ in range(EQUILIBRATION_PASSES):
        solve_lu = _scaled_lu(c, s)
        prev = np.inf
        for _ in range(REFINEMENT_MAX):
            corr = solve_lu(exact.residual(rhs, x))
            if not np.all(np.isfinite(corr)):
                raise NonUniqueSteadyStateError("constrained Liouvillian is singular")
            x.add(corr)
            value = x.value()
            change = float(np.max(np.abs(corr) / _element_bounds(value, d)))
            if change <= REFINEMENT_TOL:
                done = True
                break
            if change > 0.5 * prev:
                break
            prev = change
        if done:
            break
        s = _scales(value[np.arange(d) * (d + 1)].real)
    if not done:
        raise NonUniqueSteadyStateError("iterative refinement did not settle; steady state is ill-determined")
    rho = unvec(value, d)
    rho = 0.5 * (rho + rho.conj().T)
    residual = float(np.max(np.abs(L.entries @ vec(rho))))
    if check:
        validate_density_matrix(rho)
    state = DensityMatrix(rho, t, check=False)
    return SteadyStateReport(state, residual, t, residual <= RESIDUAL_TOL)


def g2_zero(rho: DensityMatrix, floor: float = OCCUPATION_FLOOR) -> float:
    """Equal-time second-order correlation of mode a."""
    a, _ = rho.truncation.mode_ops()
    ad = adjoint(a)
    n = expectation(ad @ a, rho).real
    if n <= floor:
        raise UndefinedCorrelationError(f"<a^+ a> = {n:.3e} is below the floor {floor:.1e}")
    nn = expectation(ad @ ad @ a @ a, rho).real
    return nn / n**2


def mean_photons(rho: DensityMatrix, mode: str = "a") -> float:
    a, b = rho.truncation.mode_ops()
    op = a if mode == "a" else b
    return expectation(adjoint(op) @ op, rho).real


def solve(p: SystemParams, t: Truncation = DEFAULT_TRUNCATION) -> SteadyStateReport:
    return steady_state(build_liouvillian(p, t))


def converged_g2(
    p: SystemParams,
    t0: Truncation = DEFAULT_TRUNCATION,
    rtol: float = CONVERGENCE_RTOL,
    max_cutoff: int = MAX_CUTOFF,
    trace: list | None = None,
):
    """Grow both cutoffs by one until g2(0) moves by less than ``rtol`` (relative).

    Returns ``(g2, report)`` for the larger of the last two truncations. If
    ``trace`` is a list, ``(truncation, g2)`` pairs are appended to it.
    """
    t = t0
    report = solve(p, t)
    g_prev = g2_zero(report.rho)
    if trace is not None:
        trace.append((t, g_prev))
    while max(t.n_max_a, t.n_max_b) < max_cutoff:
        t = t.grown()
        report = solve(p, t)
        g = g2_zero(report.rho)
        if trace is not None:
            trace.append((t, g))
        if abs(g - g_prev) <= rtol * abs(g):
            return g, report
        g_prev = g
    raise ConvergenceError(
        f"g2(0) not converged to rtol={rtol:g} by cutoff {max_cutoff}; last value {g_prev:.6e}"
    )


# -- Jaynes-Cummings comparison ----------------------------------------------


def build_jc_liouvillian(p: SystemParams, cavity_truncation: int) -> Superoperator:
    """Cavity decay kappa_a and qubit lowering at rate kappa_b, zero temperature."""
    h = build_jc_hamiltonian(p, cavity_truncation)
    a, sm, _ = jc_operators(cavity_truncation)
    jumps = [np.sqrt(p.kappa_a) * a, np.sqrt(p.kappa_b) * sm]
    return liouvillian_from(h, jumps, jc_truncation(cavity_truncation))


def jc_g2(p: SystemParams, cavity_truncation: int = 3) -> float:
    report = steady_state(build_jc_liouvillian(p, cavity_truncation))
    return g2_zero(report.rho)


def check_positive(rho: DensityMatrix, tol: float = POSITIVITY_TOL) -> float:
    m = float(np.linalg.eigvalsh(rho.entries).min())
    if m < -tol:
        raise InvalidStateError(f"negative eigenvalue {m:.3e}")
    return m
