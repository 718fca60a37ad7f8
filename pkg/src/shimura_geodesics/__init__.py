"""Intersection numbers of real quadratic geodesics on Shimura curves.

The n-th coefficient of the generating series is computed two ways -- as a
signed sum over orbits of quaternions (``series.elliptic_coeff``) and as a
signed count of crossing geodesic axes (``geodesics.oracle_coeff``) -- and
the two are compared exactly.
"""

from .config import load_config, load_context
from .exact import BiquadElem, QuadElem, RealPlace, fundamental_tp_unit, fundamental_unit, quad_sign
from .fform import FFormContext
from .geodesics import crossing_sign, oracle_coeff, split_matrix
from .orbits import canonicalize, enumerate_orbits, enumerate_orbits_oracle
from .quaternion import EichlerOrderLattice, EmbeddingData, QuatAlgebra, Quaternion
from .series import CoeffTable, elliptic_coeff, hilbert_coeffs, report

__version__ = "0.1.0"
