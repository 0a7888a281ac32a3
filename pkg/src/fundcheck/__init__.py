"""Compatibility of fundamental matrices on viewing graphs.

Given rank-2 3x3 matrices attached to the edges of a viewing graph, this
library decides whether projective cameras exist whose pairwise fundamental
matrices reproduce them, classifies the camera-center configuration,
reports exact polynomial residuals, and reconstructs the cameras when they
exist.
"""
from .compatibility import (
    COMPATIBLE,
    INCOMPATIBLE,
    UNDETERMINED,
    CompatReport,
    check_case1,
    check_case2,
    check_case3,
    check_case4,
    check_complete,
    check_quadruple,
    check_triple,
    check_triple_collinear,
    check_triple_noncollinear,
    classify_quadruple,
    uniqueness,
)
from .cycle import (
    ViewingGraph,
    cameras_from_cycle_solution,
    check_general_graph,
    cycle_residuals,
    skew_data,
    skew_data_from_matrices,
)
from .epipolar import (
    apply_action,
    collinear_action,
    epipolar_number,
    epipoles,
    normalizing_action,
)
from .exceptions import (
    CoincidentCenters,
    CycleConditionViolated,
    DegenerateConfiguration,
    FundcheckError,
    GraphError,
    InvalidCamera,
    InvalidInput,
    RankError,
    ReconstructionFailed,
    ScaleRecoveryError,
    SchemaError,
)
from .fundamental import (
    camera_center,
    canonical_pair,
    fundamental_map,
    translation_camera,
    verify_fundamental,
)
from .nview import NViewMatrix, assemble, kgg_test, rank_only_test, recover_scales
from .projective import (
    Tolerances,
    cross_matrix,
    cross_vector,
    proj_distance,
    proj_normalize,
    rank_with_tol,
    right_kernel,
)
from .reconstruction import (
    Reconstruction,
    centers_equivalent,
    reconstruct_collinear,
    reconstruct_complete,
)
from .sets import FundamentalSet
from .synth import SceneSpec, perturb, random_scene, scene_set

__version__ = "0.1.0"
