"""Tight 4-designs in Hamming schemes: parameters, constructions and triple intersection numbers."""

from .designs import derived_scheme, fission_check, fibers, known_design, t2s2_scheme
from .exactmath import ExactMatrix, invert, rational_eigenvalues, solve_affine
from .hamming import PointSet, design_strength, inner_distribution, krawtchouk, rao_bound, wilson_zeros
from .oafile import parse_oa_file, write_oa_file
from .scheme import KreinArray, SchemeParameters, feasibility_report, from_krein_array, krein_zero_set
from .triple import build_system, integer_feasible, scan_noda, solve_parametric

__version__ = "0.1.0"
