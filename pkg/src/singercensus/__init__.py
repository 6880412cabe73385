"""Exact finite-field censuses with closed-form verification.

Counts block companion matrices of maximal multiplicative order, splitting
subspaces, coprime polynomial tuples, and nonsingular Toeplitz matrices over
small finite fields, and compares every count against its closed form.
"""

from .numtheory import (
    CeilingExceeded,
    Factorization,
    count_irreducible_polys,
    count_primitive_polys,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    is_prime_power,
    moebius,
)
from .gf import (
    FieldMismatch,
    FieldSpec,
    FieldTower,
    GFElem,
    GFPoly,
    build_field_tower,
    canonical_field,
    element_order,
    elements,
    field_for_order,
    field_tag,
    is_irreducible,
    is_primitive,
    min_poly_over_mid,
    monic_polys,
    poly_from_text,
    poly_gcd,
    poly_to_text,
    roots_in_top,
)
from .linalg import (
    BlockCompanionSpec,
    CriterionDisagreement,
    GFMatrix,
    NilpotentCount,
    SingularMatrix,
    UnsupportedMatrix,
    assemble_block_companion,
    centralizer_size,
    centralizer_size_bruteforce,
    char_poly,
    companion_matrix,
    is_singer_cycle,
    lift_to_block_companion,
    matrix_from_text,
    matrix_of_mult_in_basis,
    matrix_order,
    matrix_to_text,
    nilpotent_count,
    recognize_block_companion,
    regular_representation,
)
from .census import (
    BoundsTriple,
    CoprimeCensus,
    FiberReport,
    SplitCensus,
    binomial_irreducibility,
    bounds_check,
    conjectured_fiber_size,
    conjectured_singer_count,
    coprime_all_count,
    coprime_census,
    coprime_monic_count,
    count_ordered_bases_N,
    enumerate_fibers,
    enumerate_splitting_subspaces,
    fermat_condition_search,
    fiber_via_N,
    find_generator,
    pointed_splitting_counts,
    sigma_count,
    split_census,
    toeplitz_census,
    toeplitz_via_trinomial,
    verify_elemsplit,
)
from .report import VerificationReport, parse_report, serialize
from .cli import RunConfig, run

__version__ = "0.1.0"
