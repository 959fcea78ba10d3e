"""Bivector (quaternion) algebra, the hidden-sign measurement model and its
correlation estimators, a CHSH simulation harness, and a derivation checker."""

from .algebra import (
    DomainError,
    ModeError,
    Multivector,
    Sign,
    TableMode,
    UnitVector3,
    Vector3,
    add,
    basis,
    conj,
    decompose,
    dot,
    embed,
    inverse,
    isclose,
    lambda_basis,
    mul,
    neg,
    recompose,
    scale,
    table_product,
    wedge_coeffs,
)
from .model import (
    CorrelationEstimate,
    LambdaStream,
    christian_claim,
    corrected_closed_form,
    estimator_by_table,
    measure_A,
    measure_B,
    normalized_correlation,
    raw_correlation,
    table_pair_product,
)

__version__ = "0.1.0"
