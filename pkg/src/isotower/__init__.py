"""Quaternion order chains over real quadratic fields, with exact arithmetic
and machine-checkable isospectrality certificates."""

from .arith import factor, hensel_lift, kronecker, sqrt_mod
from .quadfield import QuadField, class_field_group, class_group, narrow_class_group
from .quatalg import QuatAlgebra, hilbert_symbol, search_algebras, type_number
from .local import (
    build_R2m,
    local_embedding_count,
    norm_one_generated_ring,
    normalizer_norm_classes,
    unit_index,
    unramified_ext,
)
from .chains import (
    build_chain_family,
    distance_idele,
    find_frobenius_primes,
    maximal_order,
    same_genus,
    verify_theorem_conditions,
)
from .cert import certify_isospectral, embeds_in_algebra, enumerate_traces, tower_report, witness_search

__version__ = "0.1.0"
