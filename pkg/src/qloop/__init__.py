"""Exact constructions of loop-algebra representations and their eigenvalue data.

The package builds finite windows of evaluation and oscillator modules over
the rank-one and rank-two quantum loop algebras, realizes the loop generators
on them along two independent computational routes, and extracts the factored
rational eigenvalues of the commuting diagonal currents.
"""

from .coeff import Mono, ONE, ZERO, field, kappa, qbinomial, qfactorial, qnum, render
from .linop import (
    SparseOperator,
    Vec,
    WeightModule,
    commutator,
    finite_gl2,
    osc_module,
    osc_pair,
    tensor_module,
    verma_gl2,
    verma_gl3,
)
from .series import ASC, DESC, TruncatedSeries
from .presentations import (
    GeneratorImages,
    defining_relation_checks,
    jimbo_sl2,
    jimbo_sl2_finite,
    jimbo_sl3,
    osc_rep_sl2,
    osc_rep_sl3,
    shift_rep,
    spectral_twist,
    tensor_rep,
    theta_sl2,
    theta_sl3,
    twist_sigma,
    twist_tau,
)
from .cartanweyl import (
    build_root_vectors,
    chi,
    drinfeld_checks,
    phi_minus_series,
    phi_mode,
    phi_plus_series,
    xi_minus,
    xi_plus,
)
from .gauss import current_factor, eliminate, entry_matrix, phi_via_gauss
from .lweights import (
    CurrentAction,
    DISCREPANCIES,
    DegenerateWeight,
    Discrepancy,
    FactorError,
    FactorizationReport,
    JordanBlock,
    LWeight,
    LWeightError,
    LWeightVector,
    NoRationalForm,
    NotAnEigenvector,
    RationalForm,
    build_w_basis,
    catalog_ids,
    closed_form,
    discrepancies_for,
    eigenvalue_series,
    factorization_report,
    factorization_substitutions,
    joint_eigenvectors,
    lweight_decompose,
    match_prefundamental,
    series_matches,
    oscillator_triple_images,
    oscillator_triple_lweight,
    rational_reconstruct,
    rational_reconstruct_pair,
    tensor_highest_lweight,
    weight_id,
    weight_strings,
)

__version__ = "0.1.0"
