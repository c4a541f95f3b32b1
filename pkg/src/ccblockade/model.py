"""Parameter records and Hamiltonian builders for the driven coupled-cavity model.

Mode ``a`` is the driven linear cavity, mode ``b`` carries the Kerr term
``K (b^+ b)^2``. Every quantity is expressed in one reference rate (usually
the common decay rate, or the hopping strength for the JC comparison).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .fock import Truncation, adjoint, annihilation_op, tensor

PARAM_FIELDS = (
    "delta_a",
    "delta_b",
    "kerr",
    "hop",
    "drive",
    "kappa_a",
    "kappa_b",
    "nbar_a",
    "nbar_b",
)


@dataclass(frozen=True)
class SystemParams:
    delta_a: float = 0.0
    delta_b: float = 0.0
    kerr: float = 0.0
    hop: float = 0.0
    drive: float = 0.0
    kappa_a: float = 1.0
    kappa_b: float = 1.0
    nbar_a: float = 0.0
    nbar_b: float = 0.0

    def __post_init__(self):
        for name in PARAM_FIELDS:
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.kappa_a <= 0:
            raise ParameterError(f"kappa_a must be > 0, got {self.kappa_a}")
        if self.kappa_b <= 0:
            raise ParameterError(f"kappa_b must be > 0, got {self.kappa_b}")
        if self.drive < 0:
            raise ParameterError(f"drive must be >= 0, got {self.drive}")
        if self.nbar_a < 0 or self.nbar_b < 0:
            raise ParameterError("thermal occupations must be >= 0")

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def scaled(self, factor: float) -> "SystemParams":
        """All rates and detunings multiplied by ``factor`` (occupations untouched)."""
        return self.replace(
            delta_a=self.delta_a * factor,
            delta_b=self.delta_b * factor,
            kerr=self.kerr * factor,
            hop=self.hop * factor,
            drive=self.drive * factor,
            kappa_a=self.kappa_a * factor,
            kappa_b=self.kappa_b * factor,
        )

    @classmethod
    def symmetric(cls, delta, kerr, hop, drive, kappa=1.0, nbar_a=0.0, nbar_b=0.0):
        """Equal detunings and equal decay rates, the setting used for most figures."""
        return cls(delta, delta, kerr, hop, drive, kappa, kappa, nbar_a, nbar_b)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class LabFrameParams:
    omega_a: float
    omega_b: float
    omega_d: float
    kerr: float = 0.0
    hop: float = 0.0
    drive: float = 0.0
    kappa_a: float = 1.0
    kappa_b: float = 1.0
    nbar_a: float = 0.0
    nbar_b: float = 0.0

    def to_system(self) -> SystemParams:
        return SystemParams(
            delta_a=self.omega_a - self.omega_d,
            delta_b=self.omega_b - self.omega_d,
            kerr=self.kerr,
            hop=self.hop,
            drive=self.drive,
            kappa_a=self.kappa_a,
            kappa_b=self.kappa_b,
            nbar_a=self.nbar_a,
            nbar_b=self.nbar_b,
        )


def _two_mode_ops(t: Truncation):
    a, b = t.mode_ops()
    return a, adjoint(a), b, adjoint(b)


def build_hamiltonian(p: SystemParams, t: Truncation) -> np.ndarray:
    a, ad, b, bd = _two_mode_ops(t)
    na = ad @ a
    nb = bd @ b
    h = (
        p.delta_a * na
        + p.delta_b * nb
        + p.kerr * (nb @ nb)
        + p.hop * (ad @ b + a @ bd)
        + p.drive * (ad + a)
    )
    return h


def build_undriven(p: SystemParams, t: Truncation) -> np.ndarray:
    return build_hamiltonian(p.replace(drive=0.0), t)


def build_nonhermitian(p: SystemParams, t: Truncation) -> np.ndarray:
    a, ad, b, bd = _two_mode_ops(t)
    return build_hamiltonian(p, t) - 0.5j * (p.kappa_a * (ad @ a) + p.kappa_b * (bd @ b))


def total_number(t: Truncation) -> np.ndarray:
    a, ad, b, bd = _two_mode_ops(t)
    return ad @ a + bd @ b


def excitation_states(n_exc: int) -> list[tuple[int, int]]:
    """Bare states ``(m, n)`` with ``m + n = n_exc``, ordered by decreasing ``n``.

    For two excitations this is ``|0,2>, |1,1>, |2,0>``, the ordering of the
    closed-form 3x3 block.
    """
    return [(m, n_exc - m) for m in range(n_exc + 1)]


def excitation_block(h: np.ndarray, t: Truncation, n_exc: int) -> np.ndarray:
    idx = [t.index(m, n) for m, n in excitation_states(n_exc)]
    return h[np.ix_(idx, idx)]


# -- Jaynes-Cummings reduction ------------------------------------------------
#
# The two-level system replaces mode b truncated to {|0>_b, |1>_b}, so the JC
# space reuses the a-major composite ordering with n_max_b = 1 and
# sigma_- = b restricted to two levels.


def jc_truncation(cavity_truncation: int) -> Truncation:
    return Truncation(cavity_truncation, 1)


def jc_operators(cavity_truncation: int):
    """Return ``(a, sigma_minus, sigma_z)`` on the cavity (x) qubit space."""
    dim_c = cavity_truncation + 1
    sm = annihilation_op(2)
    sz = np.diag([-1.0, 1.0]).astype(complex)
    a = tensor(annihilation_op(dim_c), np.eye(2))
    return a, tensor(np.eye(dim_c), sm), tensor(np.eye(dim_c), sz)


def build_jc_hamiltonian(p: SystemParams, cavity_truncation: int) -> np.ndarray:
    a, sm, sz = jc_operators(cavity_truncation)
    ad, sp = adjoint(a), adjoint(sm)
    return (
        p.delta_a * (ad @ a)
        + 0.5 * (p.delta_b + p.kerr) * sz
        + p.hop * (ad @ sm + sp @ a)
        + p.drive * (ad + a)
    )


def jc_excitation_number(cavity_truncation: int) -> np.ndarray:
    a, sm, sz = jc_operators(cavity_truncation)
    return adjoint(a) @ a + 0.5 * (sz + np.eye(sz.shape[0]))
