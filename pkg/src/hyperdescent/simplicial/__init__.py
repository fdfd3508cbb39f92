"""Truncated and finite simplicial sets, coskeleta, hypercovers and homotopies."""

from .core import (Cell, SetMap, SimplicialMap, TruncatedSimplicialSet, Violation, cell_str, constant,
                   disjoint_union, empty, from_vertex_tuples, identity_map, monotone_maps, point, product, sk,
                   standard_simplex, to_point, validate, validate_map)
from .coskeleton import (comparison_map, cosk, cosk_map, point_base, relative_cosk, relative_cosk_map, subsets,
                         unit)
from .finite import (Decomposition, FiniteSimplicialSet, boundary, hom_delta, is_split, nondegenerate_decomposition,
                     normal_form, pushout, simplex)
from .homotopy import Homotopy, HomotopyReport, build_homotopy_cosk0, build_homotopy_coskn, discrete, interval
from .hypercover import (HypercoverReport, MorphismClass, bijective, comparison, fiber_sizes, fibers_of_size,
                         is_hypercover, morphism_class, surjective)
