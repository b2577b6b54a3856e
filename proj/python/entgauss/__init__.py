"""Entropy-constrained Gaussian channel toolkit.

High-SNR capacity-achieving discrete Gaussians, lattice theta potentials,
certified conditional-entropy quadrature and extremal verification.
"""

from ._entgauss import *  # noqa: F401,F403
from ._entgauss import __version__  # noqa: F401
