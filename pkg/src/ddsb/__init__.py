"""Training-free ED/ES frame detection for grayscale echo sequences.

The pipeline segments the dark cardiac cavity per frame with a local-mean
threshold, picks anchor points from the pixels most persistently inside the
cavity over the whole sequence, casts rays from those anchors to measure the
boundary distance in many directions, and reads the end-diastolic /
end-systolic frame pair off the cumulative expansion-rate curve. A synthetic
phantom generator and an evaluation harness make every stage testable without
clinical data.
"""

from .anchors import (
    AnchorSet,
    band_anchors,
    candidate_mask,
    select_anchor_region,
    temporal_occupancy,
)
from .config import Config
from .discriminator import (
    DetectionResult,
    ExpansionCurve,
    PhaseResult,
    cumulative_curve,
    deltas_for_transition,
    detect_phases,
    detect_phases_from_masks,
    directions,
    expansion_rate,
    find_phase_pair,
    ray_distance,
    ray_distances,
)
from .evaluation import (
    AnnotatedSequence,
    EvalReport,
    build_report,
    mae,
    size_based_detect,
    splice_flip,
    splice_flip_at,
    sweep,
    sweep_table,
)
from .imgproc import (
    adaptive_threshold,
    as_binary_mask,
    as_gray_frame,
    filter_small_components,
    label_components,
)
from .phantom import (
    PhantomSequence,
    PhantomSpec,
    ellipse_interior,
    generate,
    perturb_masks,
    pulsation_profile,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorSet",
    "AnnotatedSequence",
    "Config",
    "DetectionResult",
    "EvalReport",
    "ExpansionCurve",
    "PhantomSequence",
    "PhantomSpec",
    "PhaseResult",
    "adaptive_threshold",
    "as_binary_mask",
    "as_gray_frame",
    "band_anchors",
    "build_report",
    "candidate_mask",
    "cumulative_curve",
    "deltas_for_transition",
    "detect_phases",
    "detect_phases_from_masks",
    "directions",
    "ellipse_interior",
    "expansion_rate",
    "filter_small_components",
    "find_phase_pair",
    "generate",
    "label_components",
    "mae",
    "perturb_masks",
    "pulsation_profile",
    "ray_distance",
    "ray_distances",
    "select_anchor_region",
    "size_based_detect",
    "splice_flip",
    "splice_flip_at",
    "sweep",
    "sweep_table",
    "temporal_occupancy",
    "__version__",
]
