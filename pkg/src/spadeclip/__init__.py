"""Sparse audio declipping over tight DFT frames.

Three ADMM-derived solver variants (analysis, original synthesis, and the
corrected synthesis formulation) restore hard-clipped audio by alternating
sparsity-enforcing hard thresholding with projections onto the set of
clipping-consistent signals.
"""

from .feasible import ClipModel, detect_masks, hard_clip, project_gamma, project_gamma_coef
from .frames import FrameKind, FrameOperator, make_frame
from .metrics import DeclipReport, sdr, sdr_masked
from .pipeline import declip_signal
from .segmentation import SegmentationPlan, overlap_add, plan_segmentation, restrict_model, split
from .solvers import (
    SolveResult,
    SolverParams,
    SolverState,
    Variant,
    hard_threshold,
    run_solver,
)

__all__ = [
    "ClipModel",
    "DeclipReport",
    "FrameKind",
    "FrameOperator",
    "SegmentationPlan",
    "SolveResult",
    "SolverParams",
    "SolverState",
    "Variant",
    "declip_signal",
    "detect_masks",
    "hard_clip",
    "hard_threshold",
    "make_frame",
    "overlap_add",
    "plan_segmentation",
    "project_gamma",
    "project_gamma_coef",
    "restrict_model",
    "run_solver",
    "sdr",
    "sdr_masked",
    "split",
]

__version__ = "0.1.0"
