"""Affine embeddings between self-similar Cantor sets.

Exact arithmetic (rationals and real algebraic numbers) drives the
embedding engines; only the Fourier and box-counting probes use floats.
"""

from .algebraic import (
    AlgebraicReal,
    FieldElement,
    NumberField,
    PisotVerdict,
    garsia_separation,
    is_pisot,
    isolate_real_roots,
    reduce_in_field,
    refine,
)
from .certificates import (
    ExpansionCertificate,
    FeasibilityCertificate,
    certificate_json,
    decode_certificate,
    encode_certificate,
    replay,
)
from .dimension import (
    DimEstimate,
    ExplicitPrefix,
    attractor_dim_estimate,
    furstenberg_sweep,
    intersection_dim_estimate,
    orbit_closure_dim_estimate,
)
from .embed import (
    Branches,
    ConsistentToDepth,
    EmbeddingCertificate,
    EmbeddingProblem,
    ExactEmbeds,
    ExactRefuted,
    FeasibleOffsets,
    ForcedPrefix,
    HoleCertificate,
    RefutedAtDepth,
    decide_embedding_exact,
    feasible_offsets,
    lemma_ex1_family,
    refute_all_offsets_hole,
    rescale_witness,
    translate_set,
    unique_signed_expansion,
    verify_embedding,
)
from .errors import *  # noqa: F401,F403
from .fourier import (
    CantorMeasure,
    EmptyFeasible,
    PiMultiple,
    ProbeSeries,
    eta_hat,
    mu_hat_modulus,
    offset_function,
    probe_sequence,
    wiener_average,
)
from .selfsimilar import (
    CentralCantor,
    HomogeneousIFS,
    IntervalCover,
    Periodic,
    cantor_p_set,
    contains_point,
    coding_to_point,
    is_set_of_uniqueness,
    level_cover,
    similarity_dimension,
    solve_s_n,
)

__version__ = "0.1.0"
