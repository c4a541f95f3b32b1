"""Weak-driving solutions truncated at two excitations.

Three routes to the same low-order steady state:

* ``amplitude_steady_state`` - closed-form amplitudes C_mn of the
  non-Hermitian wavefunction (equal detunings, equal decay rates).
* ``general_amplitude_steady_state`` - the same hierarchy solved as small
  linear systems, for arbitrary rates.
* ``dme_steady_state`` - closed-form density-matrix elements over the six
  states S1..S6 = |0,0>, |0,1>, |0,2>, |1,0>, |1,1>, |2,0>.

``interference_decomposition`` re-expresses the amplitudes in the
eigenbasis of the undriven Hamiltonian and splits rho44 and rho66 into direct
and cross (interference) terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ResonanceSingularityError, UndefinedCorrelationError
from .fock import Truncation
from .model import SystemParams, build_nonhermitian, excitation_states
from .spectrum import single_excitation_eigensystem, two_excitation_eigensystem

SQRT2 = np.sqrt(2.0)
UNDERFLOW = 1e-14
SAME_TOL = 1e-12
SINGULAR_COND = 1e13

# S-label ordering of the six low-excitation bare states
S_STATES = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0))


@dataclass(frozen=True)
class AmplitudeSet:
    c00: complex
    c10: complex
    c01: complex
    c20: complex
    c11: complex
    c02: complex
    m_denominator: complex

    def g2(self) -> float:
        """2 |C20|^2 / |C10|^4."""
        n1 = abs(self.c10) ** 2
        if n1 <= UNDERFLOW:
            raise UndefinedCorrelationError(f"|C10|^2 = {n1:.3e} below floor")
        return 2.0 * abs(self.c20) ** 2 / n1**2

    def vector(self) -> np.ndarray:
        """Amplitudes in S order (|0,0>, |0,1>, |0,2>, |1,0>, |1,1>, |2,0>)."""
        return np.array([self.c00, self.c01, self.c02, self.c10, self.c11, self.c20])


@dataclass(frozen=True)
class DmeSet:
    """rho[m - 1, n - 1] = <S_m| rho |S_n>."""

    rho: np.ndarray
    p_denom: complex
    q_denom: complex

    def element(self, m: int, n: int) -> complex:
        return complex(self.rho[m - 1, n - 1])


@dataclass(frozen=True)
class InterferenceSplit:
    rho44_direct: float
    rho44_interference: float
    rho66_direct: float
    rho66_interference: float
    eigen_amplitudes: dict
    rho44_total: float = float("nan")  # |sum_s D_1s C_10^[1s]|^2, computed independently
    rho66_total: float = float("nan")

    def g2_direct(self) -> float:
        """g2 from the non-interference parts only."""
        if self.rho44_direct <= UNDERFLOW:
            raise UndefinedCorrelationError("direct rho44 below floor")
        return 2.0 * self.rho66_direct / self.rho44_direct**2


def _require(cond, message):
    if not cond:
        raise PreconditionError(message)


def _zero_temperature(p):
    _require(p.nbar_a == 0 and p.nbar_b == 0, "weak-driving solutions are zero-temperature only")


def _same(x, y):
    return abs(x - y) <= SAME_TOL * max(1.0, abs(x), abs(y))


def amplitude_steady_state(p: SystemParams) -> AmplitudeSet:
    _zero_temperature(p)
    _require(
        _same(p.delta_a, p.delta_b) and _same(p.kappa_a, p.kappa_b),
        "closed-form amplitudes need delta_a == delta_b and kappa_a == kappa_b; "
        "use general_amplitude_steady_state",
    )
    d, k, j, w, kap = p.delta_a, p.kerr, p.hop, p.drive, p.kappa_a
    first = 4 * j**2 + (kap + 2j * d) * (2j * k + kap + 2j * d)
    second = (kap + 2j * d) * (4 * k - 1j * kap + 2 * d) * (2j * k + 2 * kap + 4j * d) + 4 * j**2 * (
        4 * k - 2j * kap + 4 * d
    )
    m = first * second
    if abs(first) <= UNDERFLOW or abs(second) <= UNDERFLOW:
        raise ResonanceSingularityError("amplitude denominator vanishes")
    c10 = 2 * (2 * k - 1j * kap + 2 * d) * w / first
    c01 = -4 * j * w / first
    c20 = (
        2
        * SQRT2
        * ((2 * k - 1j * kap + 2 * d) * (4 * k - 1j * kap + 2 * d) * (2 * k - 2j * kap + 4 * d) + 8 * j**2 * k)
        * w**2
        / m
    )
    c11 = -8 * j * (4 * k - 1j * kap + 2 * d) * (2 * k - 2j * kap + 4 * d) * w**2 / m
    c02 = 8 * SQRT2 * j**2 * (2 * k - 2j * kap + 4 * d) * w**2 / m
    return AmplitudeSet(1.0 + 0j, c10, c01, c20, c11, c02, m)


def _checked_solve(block, rhs, order):
    cond = np.linalg.cond(block)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise ResonanceSingularityError(f"order-{order} amplitude system is singular (cond={cond:.2e})")
    return np.linalg.solve(block, rhs)


def general_amplitude_steady_state(p: SystemParams) -> AmplitudeSet:
    """Order-by-order steady state of i dC/dt = H_nH C with C00 = 1.

    Each order solves H_NN C_N = -H_{N,N-1} C_{N-1}, dropping the feedback
    of higher orders onto lower ones.
    """
    _zero_temperature(p)
    t = Truncation(2, 2)
    h = build_nonhermitian(p, t)
    idx = {N: [t.index(m, n) for m, n in excitation_states(N)] for N in (0, 1, 2)}
    c0 = np.array([1.0 + 0j])
    h11 = h[np.ix_(idx[1], idx[1])]
    c1 = _checked_solve(h11, -h[np.ix_(idx[1], idx[0])] @ c0, 1)
    h22 = h[np.ix_(idx[2], idx[2])]
    c2 = _checked_solve(h22, -h[np.ix_(idx[2], idx[1])] @ c1, 2)
    # idx[1] ~ (|1,0>... ) ordering follows excitation_states: (0,1), (1,0)
    c01, c10 = c1
    c02, c11, c20 = c2
    m = 8.0 * np.linalg.det(h11) * np.linalg.det(h22)
    return AmplitudeSet(1.0 + 0j, complex(c10), complex(c01), complex(c20), complex(c11), complex(c02), complex(m))


def dme_steady_state(p: SystemParams, corrected: bool = True) -> DmeSet:
    """Closed-form density-matrix elements up to fourth order in the drive.

    With ``corrected=False`` the printed forms of rho16, rho26, rho36, rho46
    (factor (2K + 4D + i(ka + kb)) outside the bracket with 8J^2K) and of
    rho24 (opposite sign) are used instead; those disagree with the
    second- and fourth-order equations they are meant to solve and are kept
    only for comparison.
    """
    _zero_temperature(p)
    _require(_same(p.delta_a, p.delta_b), "density-matrix closed forms need delta_a == delta_b")
    d, k, j, w = p.delta_a, p.kerr, p.hop, p.drive
    ka, kb = p.kappa_a, p.kappa_b
    x = 2 * k + 1j * kb + 2 * d
    y = 4 * k + 1j * kb + 2 * d
    z = 2 * k + 4 * d + 1j * (ka + kb)
    wd = 2 * d + 1j * ka
    pp = 4 * j**2 - x * wd
    qq = -y * wd * z + 4 * j**2 * (4 * k + 4 * d + 1j * (ka + kb))
    if abs(pp) <= UNDERFLOW or abs(qq) <= UNDERFLOW:
        raise ResonanceSingularityError(f"|P| = {abs(pp):.2e}, |Q| = {abs(qq):.2e}")
    p2 = abs(pp) ** 2
    q2 = abs(qq) ** 2
    w2, w3, w4 = w**2, w**3, w**4
    if corrected:
        bracket = 8 * j**2 * k + x * y * z
        tail = 1.0
        sign24 = -1.0
    else:
        bracket = 8 * j**2 * k + x * y
        tail = z
        sign24 = 1.0

    r = np.zeros((6, 6), dtype=complex)
    r[0, 0] = 1.0
    r[0, 1] = -4 * j * w / pp
    r[0, 3] = 2 * x * w / pp
    r[0, 2] = 8 * SQRT2 * j**2 * z * w2 / (pp * qq)
    r[0, 4] = -8 * j * y * z * w2 / (pp * qq)
    r[0, 5] = 2 * SQRT2 * bracket * tail * w2 / (pp * qq)
    r[1, 1] = 16 * j**2 * w2 / p2
    r[3, 3] = 4 * (kb**2 + 4 * (k + d) ** 2) * w2 / p2
    r[1, 3] = sign24 * 8 * j * x * w2 / p2
    r[1, 2] = -32 * SQRT2 * j**3 * z * w3 / (p2 * qq)
    r[1, 4] = 32 * j**2 * y * z * w3 / (p2 * qq)
    r[1, 5] = -8 * SQRT2 * j * bracket * tail * w3 / (p2 * qq)
    rho43 = 16 * SQRT2 * j**2 * np.conj(x) * z * w3 / (p2 * qq)
    r[2, 3] = np.conj(rho43)
    r[3, 4] = -16 * j * np.conj(x) * y * z * w3 / (p2 * qq)
    r[3, 5] = 4 * SQRT2 * np.conj(x) * bracket * tail * w3 / (p2 * qq)
    zz = 4 * (k + 2 * d) ** 2 + (kb + ka) ** 2
    r[2, 2] = 128 * j**4 * zz * w4 / (p2 * q2)
    r[2, 4] = -64 * SQRT2 * j**3 * y * zz * w4 / (p2 * q2)
    r[2, 5] = 32 * j**2 * np.conj(z) * bracket * tail * w4 / (p2 * q2)
    r[4, 4] = 64 * j**2 * (kb**2 + 4 * (2 * k + d) ** 2) * zz * w4 / (p2 * q2)
    r[4, 5] = (
        -16 * SQRT2 * j * np.conj(y) * np.conj(z) * (8 * j**2 * k + x * y * z) * w4 / (p2 * q2)
    )
    r[5, 5] = (
        8
        * (
            64 * j**4 * k**2
            + 128 * j**2 * k * (k + d) * (-(kb**2) + 2 * k**2 + 5 * k * d + 2 * d**2)
            - 32 * j**2 * k * kb * (3 * k + 2 * d) * ka
            + (kb**2 + 4 * (k + d) ** 2) * (kb**2 + 4 * (2 * k + d) ** 2) * zz
        )
        * w4
        / (p2 * q2)
    )
    upper = np.triu_indices(6, 1)
    r[(upper[1], upper[0])] = np.conj(r[upper])
    return DmeSet(r, complex(pp), complex(qq))


def g2_approx(dme: DmeSet, floor: float = UNDERFLOW) -> float:
    rho44 = dme.rho[3, 3].real
    if rho44 <= floor:
        raise UndefinedCorrelationError(f"rho44 = {rho44:.3e} below floor")
    return 2.0 * dme.rho[5, 5].real / rho44**2


def interference_decomposition(p: SystemParams, allow_fallback: bool = False) -> InterferenceSplit:
    amps = general_amplitude_steady_state(p)
    e1 = single_excitation_eigensystem(p)
    e2 = two_excitation_eigensystem(p, allow_fallback=allow_fallback)

    psi1 = np.array([amps.c01, amps.c10])
    v1 = e1.vectors()
    d1 = v1.T @ psi1  # eigenvectors are real
    terms1 = d1 * v1[1]  # D_{1s} C^{[1s]}_{1,0}

    psi2 = np.array([amps.c02, amps.c11, amps.c20])
    v2 = e2.vectors()
    d2 = v2.T @ psi2
    terms2 = d2 * v2[2]  # D_{2s} C^{[2s]}_{2,0}

    direct44 = float(np.sum(np.abs(terms1) ** 2))
    direct66 = float(np.sum(np.abs(terms2) ** 2))
    eigen = {
        "D00": amps.c00,
        "D1+": complex(d1[0]),
        "D1-": complex(d1[1]),
        "D2-": complex(d2[0]),
        "D20": complex(d2[1]),
        "D2+": complex(d2[2]),
    }
    return InterferenceSplit(
        direct44,
        interference_cross_terms(terms1),
        direct66,
        interference_cross_terms(terms2),
        eigen,
        rho44_total=float(abs(np.sum(terms1)) ** 2),
        rho66_total=float(abs(np.sum(terms2)) ** 2),
    )


def interference_cross_terms(split_terms: np.ndarray) -> float:
    """2 Re sum_{s<t} x_s x_t^*, the cross terms of |sum x_s|^2."""
    x = np.asarray(split_terms)
    total = 0.0
    for s in range(x.size):
        for t in range(s + 1, x.size):
            total += 2.0 * (x[s] * np.conj(x[t])).real
    return total


def density_matrix_from_amplitudes(amps: AmplitudeSet) -> np.ndarray:
    """Pure-state table rho_mn = C_m C_n^* over S1..S6 (unnormalised, C00 = 1)."""
    v = amps.vector()
    return np.outer(v, v.conj())
