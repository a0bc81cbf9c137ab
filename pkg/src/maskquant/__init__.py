"""Quantum-optical response of LG beams to spatial masks.

Modules: ``numerics`` (quadrature, multistart), ``modes`` (LG fields),
``mask`` (coupling matrices), ``dilation`` (unitary completion),
``gaussian`` and ``fock`` (state engines) and ``cli``.
"""

from ._kernels import BACKEND
from .dilation import TransferMatrix, dilate
from .errors import MaskQuantError
from .mask import CircularIris, CouplingMatrix, GeneralAperture, build_coupling_matrix
from .modes import BeamGeometry, ModeIndex

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BeamGeometry",
    "CircularIris",
    "CouplingMatrix",
    "GeneralAperture",
    "MaskQuantError",
    "ModeIndex",
    "TransferMatrix",
    "build_coupling_matrix",
    "dilate",
]
