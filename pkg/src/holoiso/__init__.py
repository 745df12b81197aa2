"""Holomorphic isometries of the Poincaré disk into ``Δ × 𝔹ⁿ`` and into
classical bounded symmetric domains: construction from unitary frames and
numerical verification of the identities they satisfy."""

__version__ = "0.1.0"

from .branch import (
    BranchData,
    CongruenceInvariant,
    Inconclusive,
    ProvablyIncongruent,
    ReductionVerdict,
    branch_data,
    incongruence_certificate,
    invariants,
    peel_parameter,
    reduction_classify,
)
from .domains import (
    DomainPoint,
    DomainSpec,
    block_join,
    block_multiplicativity_residual,
    composite_residual,
    embed,
    generic_norm,
    membership,
)
from .errors import *  # noqa: F401,F403
from .family import (
    RamificationProfile,
    boundary_extension_check,
    closed_form_R,
    closed_form_ramification,
    family_map,
    rotation_equivariance_residual,
    second_component_residual,
)
from .germ import (
    DiskIsometry,
    ResidueReport,
    component_rationals,
    degenerate_solve,
    evaluate,
    polar_grid,
    rational_from_unitary,
    solve_germ,
    verify,
)
from .rational import (
    INFINITY,
    BlaschkeForm,
    Poly,
    RationalMap,
    circle_symmetry_residual,
    eval_rational,
    roots,
    to_blaschke,
)
from .rigidity import (
    WeightedCandidate,
    rationality_intake,
    rigidity_audit,
    weighted_residual,
)
from .unitary import (
    UnitaryFrame,
    build_family_unitary,
    build_hessenberg_unitary,
    check_unitary,
    schur_normalize,
)
