"""Exact-arithmetic certification of hyperbolic lattice embeddings,
sums-of-squares witnesses, and nef-cone computations on the two
families of target models."""

from .cones import (
    ConeModel,
    ReflectionTrace,
    ZariskiDecomposition,
    ample_reference,
    build_model,
    cremona,
    cremona_matrix,
    is_big,
    is_nef,
    minus_two_classes,
    nef_inequality_odd,
    pair,
    reflect,
    reflection_matrix,
    zariski_decompose,
)
from .embeddings import (
    Certificate,
    DegenerationLedger,
    Embedding,
    HypothesisReport,
    certify,
    embed_a3_explicit,
    embed_even,
    embed_odd,
    embed_rank4,
    nefify,
    nefify_pair,
    rank4_split,
    restrict_and_decompose,
    verify_hypotheses,
)
from .errors import ComputationError, K3CertError, LegendreExclusion, ValidationError
from .lattice import Rank2Lattice, reduce_rank2_basis, validate_rank2
from .linalg import (
    bilinear,
    invariant_factors,
    is_primitive_matrix,
    signature,
    smith_normal_form,
)
from .squares import (
    SquaresWitness,
    five_coprime_squares,
    four_squares,
    is_three_square_excluded,
    three_squares,
)

__version__ = "1.0.0"

__all__ = [
    "Certificate",
    "ComputationError",
    "ConeModel",
    "DegenerationLedger",
    "Embedding",
    "HypothesisReport",
    "K3CertError",
    "LegendreExclusion",
    "Rank2Lattice",
    "ReflectionTrace",
    "SquaresWitness",
    "ValidationError",
    "ZariskiDecomposition",
    "ample_reference",
    "bilinear",
    "build_model",
    "certify",
    "cremona",
    "cremona_matrix",
    "embed_a3_explicit",
    "embed_even",
    "embed_odd",
    "embed_rank4",
    "five_coprime_squares",
    "four_squares",
    "invariant_factors",
    "is_big",
    "is_nef",
    "is_primitive_matrix",
    "is_three_square_excluded",
    "minus_two_classes",
    "nef_inequality_odd",
    "nefify",
    "nefify_pair",
    "pair",
    "rank4_split",
    "reduce_rank2_basis",
    "reflect",
    "reflection_matrix",
    "restrict_and_decompose",
    "signature",
    "smith_normal_form",
    "three_squares",
    "validate_rank2",
    "verify_hypotheses",
    "zariski_decompose",
]
