"""Desk-scale l_p geometry: duality mappings, Birkhoff-James orthogonality,
invariant-vector projections of finite and shift representations, and
operator p-norms."""

from .lp import (
    INF,
    ONE,
    TWO,
    DenseVector,
    Exponent,
    ExponentError,
    SparseSeq,
    duality_map,
    inverse_duality_map,
    norm,
    pair,
    psum_embed,
    psum_norm,
)
from .orthogonality import BjReport, bj_minimize, bj_orthogonal, kato_pairing
from .groups import (
    FiniteGroup,
    GroupTableError,
    ProjectionPair,
    SignedPermRep,
    SignedPermutation,
    cyclic_group,
    direct_product,
    dual_isometry,
    invariant_projection,
    lemma_equivariance_check,
    parse_cayley_table,
    read_cayley_file,
    regular_representation,
)
from .opnorm import (
    Method,
    NormEstimate,
    OperatorMatrix,
    bicontractive_check,
    block_psum_norm,
    opnorm_auto,
    opnorm_brute,
    opnorm_exact,
    opnorm_power,
)
from .shift import (
    ModelVector,
    ShiftModel,
    delta_convergence_check,
    matrix_coefficient,
    opial_gap,
    shift,
    theorem1_certificate,
    wot_limit_check,
)

__version__ = "0.1.0"
