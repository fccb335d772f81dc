"""Exact polyhedral chains in ℝⁿ with slices, tensor structure and flat norms.

Everything is computed over exact rationals; masses involving square roots are
kept as sums of radicals with certified enclosures.
"""

from .chains import Chain, MassReport, boundary, cartesian_product, mass, push_forward_projection, restrict_box
from .coeff import CoefficientGroup, CoefficientValue
from .errors import (DegenerateCell, DimensionMismatch, GroupMismatch, Infeasible, NonGenericBox,
                     NonGenericLevel, NonGenericPoint, NotGridAligned, NotTensorRepresentable,
                     PolychainError, SearchBudgetExceeded, SpecInvalid, TypeMismatch, ZeroDimensional)
from .exact import Interval, RadicalSum
from .flatnorm import (CubicalComplex, GridChain, LPResult, cross_mass_bounds, flat_norm, rasterize,
                       tensor_flat_norm)
from .geometry import SimplexCell, clip_halfspace, pluecker, slice_by_hyperplane, volume
from .slicing import (SliceSpec, TypeIndex, coarea_bound, j_vanishing_test, slice_at, slice_chain,
                      slices_vanish_ae, splitting_test, types_of_dim)
from .tensor import (IChainView, TensorChain, chi, chi_wedge, d1, d2, dyadic_collapse, embed, i_inverse,
                     i_map, j_decompose)

__version__ = "0.1.0"

__all__ = [
    "Chain", "MassReport", "boundary", "cartesian_product", "mass", "push_forward_projection", "restrict_box",
    "CoefficientGroup", "CoefficientValue",
    "DegenerateCell", "DimensionMismatch", "GroupMismatch", "Infeasible", "NonGenericBox", "NonGenericLevel",
    "NonGenericPoint", "NotGridAligned", "NotTensorRepresentable", "PolychainError", "SearchBudgetExceeded",
    "SpecInvalid", "TypeMismatch", "ZeroDimensional",
    "Interval", "RadicalSum",
    "CubicalComplex", "GridChain", "LPResult", "cross_mass_bounds", "flat_norm", "rasterize", "tensor_flat_norm",
    "SimplexCell", "clip_halfspace", "pluecker", "slice_by_hyperplane", "volume",
    "SliceSpec", "TypeIndex", "coarea_bound", "j_vanishing_test", "slice_at", "slice_chain", "slices_vanish_ae",
    "splitting_test", "types_of_dim",
    "IChainView", "TensorChain", "chi", "chi_wedge", "d1", "d2", "dyadic_collapse", "embed", "i_inverse", "i_map",
    "j_decompose",
]
