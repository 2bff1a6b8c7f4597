"""Generalized Koch curves built from generalized Thue-Morse sign sequences."""
from .analysis import (
    OpenSetPolygon,
    corollary_pattern,
    imaginary_part_lemmas,
    open_set,
    osc_check,
    realness_check,
    similarity_dimension,
)
from .exceptions import NotContracting, PatternError, VertexCapExceeded
from .geometry import (
    Polyline,
    epsilon_area_ratio,
    hausdorff_distance,
    partial_sum,
    polyline_P,
    polyline_Q,
    root_of_unity,
)
from .ifs import (
    IfsSystem,
    Similarity,
    apply_similarity,
    build_ifs,
    convergence_diagnostics,
    iterate_ifs,
    limit_distance_report,
    self_similarity_check,
)
from .morphism import (
    IncidenceMatrix,
    Morphism,
    apply_morphism,
    build_morphism,
    conjugacy_check,
    dominant_eigenvalue,
    embedding_f,
    incidence_matrix,
    iterate_symbol,
    primitivity_index,
)
from .report import CheckReport
from .sequence import SignPattern, classical_tm_oracle, delta_at, make_pattern, sequence_prefix

__version__ = "0.1.0"
