"""Photon blockade in a linear cavity coupled to a Kerr cavity.

Submodules:

``fock``          truncated two-mode Fock space, operators and density matrices
``model``         parameter records and Hamiltonians (coupled cavities, JC limit)
``spectrum``      closed-form one- and two-excitation eigensystems, resonances
``lindblad``      thermal master equation, steady state and g2(0)
``perturbative``  weak-driving amplitudes, density-matrix elements, interference split
``conditions``    optimality conditions for unconventional blockade
``cli``           figure presets, sweep runner and CSV output
"""

from .errors import BlockadeError
from .fock import DensityMatrix, Truncation
from .model import LabFrameParams, SystemParams

__version__ = "0.1.0"

__all__ = [
    "BlockadeError",
    "DensityMatrix",
    "LabFrameParams",
    "SystemParams",
    "Truncation",
    "__version__",
]
