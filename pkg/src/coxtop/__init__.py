"""Exact computations with Coxeter groups, buildings and the cohomology
of their realizations."""

from .coxmatrix import (
    INF,
    CoxeterError,
    CoxeterMatrix,
    SphericalPoset,
    cosine_gram_definite,
    is_spherical,
    parse_coxeter_matrix,
    spherical_poset,
)
from .groups import BallTable, Element, ElementTable, descent_set, enumerate_ball, enumerate_group
from .intlinalg import (
    OMEGA,
    AbGroup,
    CochainComplex,
    GradedGroup,
    SNFResult,
    TorsionObstruction,
    determinant,
    direct_complement,
    quotient_structure,
    smith_normal_form,
)
from .complexes import (
    MirroredComplex,
    ReducedCohomology,
    SimplicialComplex,
    classical_chamber,
    davis_chamber,
    flag_complex,
    metric_flag_check,
    nerve,
    punctured_nerve_homology,
    reduced_cohomology,
    relative_cohomology,
)
from .chambers import (
    ChamberError,
    ChamberSystem,
    Residue,
    digon_building,
    fano_building,
    parse_chamber_system,
    product_building,
    projective_plane_building,
    residues,
    thin_building,
    verify_building,
    w_distance,
)
from .decomposition import (
    BuildingDecomposition,
    DecompositionWitness,
    above_module,
    choose_splitting,
    classical_chamber_cohomology,
    coefficient_cochain_complex,
    coefficient_cohomology,
    d_quotient,
    filtration_ranks,
    residue_module,
    sigma_formula_check,
    verify_decomposition,
)
from .realization import (
    RealizedComplex,
    coxeter_complex,
    formula_cross_check,
    realization_cohomology,
    realize,
)
from .hc import (
    GrowthSeries,
    HcReport,
    duality_check,
    graded_module_report,
    hc_standard_realization,
    thin_multiplicity_series,
    vcd,
)

__version__ = "0.1.0"
