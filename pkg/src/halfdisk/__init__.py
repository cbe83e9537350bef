"""Boundary intersection indices of analytic half-disks attached to totally
real surfaces: exact series comparison, Gauss-linking verification, grid
perturbation solver, and integer Maslov/adjunction bookkeeping."""

from .rational import QC
from .series import TruncatedSeries
from .structures import (AntiLinearContraction, StructureField, blend_cones,
                         cayley_k, cayley_l, minus_structure,
                         reflect_structure, structure_from_json)
from .normal_form import (HalfDiskMap, NormalForm, normal_form, series_inverse,
                          tangency_order)
from .comparison import ComparisonResult, compare
from .intersection import (IndexReport, boundary_index_linking,
                           boundary_index_series, split_to_transverse)
from .grid import DiskGrid, GridField, extend_l1p
from .cauchy import cauchy_green, neumann_inverse, right_inverse_base
from .solver import (CuspSmoothResult, SolveConfig, SolveResult, smooth_cusp,
                     solve_perturbation)
from .adjunction import (CurveConfig, SectionZeroData, check_adjunction,
                         maslov_from_zeros, maslov_sum, maslov_tangent,
                         move_boundary_surgery, move_cusp_to_nodes,
                         move_node_to_handle)

__version__ = "0.1.0"

__all__ = [
    "QC", "TruncatedSeries",
    "AntiLinearContraction", "StructureField", "blend_cones", "cayley_k",
    "cayley_l", "minus_structure", "reflect_structure", "structure_from_json",
    "HalfDiskMap", "NormalForm", "normal_form", "series_inverse",
    "tangency_order",
    "ComparisonResult", "compare",
    "IndexReport", "boundary_index_linking", "boundary_index_series",
    "split_to_transverse",
    "DiskGrid", "GridField", "extend_l1p",
    "cauchy_green", "neumann_inverse", "right_inverse_base",
    "CuspSmoothResult", "SolveConfig", "SolveResult", "smooth_cusp",
    "solve_perturbation",
    "CurveConfig", "SectionZeroData", "check_adjunction", "maslov_from_zeros",
    "maslov_sum", "maslov_tangent", "move_boundary_surgery",
    "move_cusp_to_nodes", "move_node_to_handle",
    "__version__",
]
