"""Homotopy theory of finite posets, with certificates.

Posets as finite spaces, reduction methods (beat, weak and gamma
points), the cylinder of a relation with generalized Theorem A
checkers, nerves and completions of covers, an independent integer
homology oracle, and a small mapper pipeline on point clouds.
"""

from .certificates import (
    EMPTY_CERTIFICATE,
    ReductionCertificate,
    ReductionStep,
    TrivialityVerdict,
)
from .complexes import (
    EMPTY_COMPLEX,
    RegularCWComplex,
    SimplicialComplex,
    barycentric_complex,
    barycentric_poset,
    cell_vertices,
    chain_complex,
    complex_as_cw,
    cw_from_face_poset,
    face_poset,
    order_complex,
)
from .cylinder import (
    CylinderPoset,
    EquivalenceReport,
    HomologyEquivalenceReport,
    HypothesisReport,
    Relation,
    build_cylinder,
    check_source_retraction,
    check_target_retraction,
    collapse_cylinder_to_source,
    collapse_cylinder_to_target,
    mapping_cylinder,
    source_local_data,
    target_local_data,
    verify_equivalence,
    verify_homology_equivalence,
)
from .errors import InputError, NotCertified, ReplayError, ValidationError
from .homology import (
    HomologyProfile,
    IntegerMatrix,
    euler_characteristic,
    fraction_free_rank,
    homology,
    rank_mod_p,
    same_homology,
    smith_normal_form,
)
from .mapper import (
    FilterSpec,
    IntervalCover,
    MapperResult,
    PointCloud,
    circle_sample,
    epsilon_components,
    figure_eight_sample,
    mapper_completion,
    parse_filter,
    pullback_cover,
)
from .nerve import (
    ComplexCover,
    CompletionPoset,
    CoverClassification,
    NerveTheoremReport,
    PosetCover,
    classify_cover,
    completion_cw,
    completion_poset,
    nerve,
    nerve_poset,
    point_subnerve,
    trivial_subnerve,
    verify_corollary_completion,
    verify_nerve_theorem,
)
from .poset import ElementSet, Poset
from .reduction import (
    DEFAULT_BUDGET,
    DictionaryReport,
    collapse_search,
    collapse_to_simplicial,
    core,
    find_beat_points,
    find_gamma_points,
    find_weak_points,
    free_pairs,
    is_collapsible,
    is_dismantlable,
    replay_poset_certificate,
    replay_simplicial_certificate,
    simplicial_collapse_search,
    triviality_oracle,
    verify_dictionary,
)
from .report import RunReport

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BUDGET",
    "EMPTY_CERTIFICATE",
    "EMPTY_COMPLEX",
    "ComplexCover",
    "CompletionPoset",
    "CoverClassification",
    "CylinderPoset",
    "DictionaryReport",
    "ElementSet",
    "EquivalenceReport",
    "FilterSpec",
    "HomologyEquivalenceReport",
    "HomologyProfile",
    "HypothesisReport",
    "InputError",
    "IntegerMatrix",
    "IntervalCover",
    "MapperResult",
    "NerveTheoremReport",
    "NotCertified",
    "PointCloud",
    "Poset",
    "PosetCover",
    "ReductionCertificate",
    "ReductionStep",
    "RegularCWComplex",
    "Relation",
    "ReplayError",
    "RunReport",
    "SimplicialComplex",
    "TrivialityVerdict",
    "ValidationError",
    "barycentric_complex",
    "barycentric_poset",
    "build_cylinder",
    "cell_vertices",
    "chain_complex",
    "check_source_retraction",
    "check_target_retraction",
    "circle_sample",
    "classify_cover",
    "collapse_cylinder_to_source",
    "collapse_cylinder_to_target",
    "collapse_search",
    "collapse_to_simplicial",
    "complex_as_cw",
    "completion_cw",
    "completion_poset",
    "core",
    "cw_from_face_poset",
    "epsilon_components",
    "euler_characteristic",
    "face_poset",
    "figure_eight_sample",
    "find_beat_points",
    "find_gamma_points",
    "find_weak_points",
    "fraction_free_rank",
    "free_pairs",
    "homology",
    "is_collapsible",
    "is_dismantlable",
    "mapper_completion",
    "mapping_cylinder",
    "nerve",
    "nerve_poset",
    "order_complex",
    "parse_filter",
    "point_subnerve",
    "pullback_cover",
    "rank_mod_p",
    "replay_poset_certificate",
    "replay_simplicial_certificate",
    "same_homology",
    "simplicial_collapse_search",
    "smith_normal_form",
    "source_local_data",
    "target_local_data",
    "triviality_oracle",
    "trivial_subnerve",
    "verify_corollary_completion",
    "verify_dictionary",
    "verify_equivalence",
    "verify_homology_equivalence",
    "verify_nerve_theorem",
]
