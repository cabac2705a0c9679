"""voronoilab: exact Voronoi reduction for rank-2 Hermitian forms over
imaginary quadratic integer rings, integral homology via Smith normal form,
and a desk-scale lab for Tits buildings, frame complexes and poset homology.
"""

from .quadarith import QuadField, QuadInt, QuadRat, Mat2
from .hermitian import (
    HermitianForm,
    MinimalVectorSet,
    evaluate,
    real_gram,
    minimal_vectors,
    perfection_rank,
)
from .polyhedra import RationalCone, Facet, facets_of_cone, face_lattice
from .homology import (
    IntMatrix,
    smith_normal_form,
    ChainComplex,
    HomologyGroup,
    FPGroup,
)
from .voronoi import (
    PerfectFormClass,
    VoronoiCell,
    VoronoiComplexData,
    initial_perfect_form,
    flip_neighbor,
    are_equivalent,
    enumerate_perfect_forms,
    polytope_shape,
    cell_orbits,
    assemble_complex,
    voronoi_pipeline,
)
from .gf import FiniteField, Subspace, subspaces_of_dim, span
from .posets import (
    PosetData,
    SimplicialComplexData,
    CoefficientFunctor,
    poset_homology_with_functor,
    reduced_homology,
    single_support_decomposition,
)
from .buildings import (
    tits_building,
    order_complex,
    steinberg_rank,
    frame_complex,
    partial_basis_complex,
    apartment_class,
    alpha_map_image_rank,
    delta_map,
    truncated_b2_components,
    SteinbergElement,
    ComponentCensus,
)

__version__ = "0.1.0"
