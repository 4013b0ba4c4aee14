"""Overlapping frame extraction and weighted overlap-add reconstruction.

Frames are extracted rectangularly (no pre-windowing) so that the solver's
sample constraints and the tight-frame property are undisturbed; the
window only weights the recombination, with explicit per-sample
normalization. The default window is a half-sample-shifted Hann, which is
strictly positive so the normalization denominator never vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .feasible import ClipModel

__all__ = ["SegmentationPlan", "shifted_hann", "plan_segmentation", "split", "overlap_add", "restrict_model"]


def shifted_hann(frame_len: int) -> np.ndarray:
    """Hann-shaped window sampled at half-integer points; strictly positive."""
    n = np.arange(frame_len)
    return np.sin(np.pi * (n + 0.5) / frame_len) ** 2


@dataclass(frozen=True)
class SegmentationPlan:
    """Frame geometry and synthesis weights for one signal length."""

    frame_len: int
    hop: int
    window: np.ndarray
    num_frames: int

    def __post_init__(self):
        if self.hop < 1 or self.hop > self.frame_len:
            raise ValueError(f"hop must be in 1..frame_len, got {self.hop}")
        if self.window.shape != (self.frame_len,):
            raise ValueError("window length must equal frame_len")
        if np.any(self.window <= 0):
            raise ValueError("window must be strictly positive")

    @property
    def padded_len(self) -> int:
        return (self.num_frames - 1) * self.hop + self.frame_len


def plan_segmentation(
    total_len: int,
    frame_len: int = 1024,
    hop: int = 256,
    window: np.ndarray | None = None,
) -> SegmentationPlan:
    """Plan frames covering a signal of `total_len` samples.

    The last frame is filled by zero-padding the signal tail.
    """
    if total_len < 1:
        raise ValueError(f"total_len must be positive, got {total_len}")
    if hop < 1 or hop > frame_len:
        raise ValueError(f"hop must be in 1..frame_len, got {hop}")
    if window is None:
        window = shifted_hann(frame_len)
    num_frames = max(0, -(-(total_len - frame_len) // hop)) + 1
    return SegmentationPlan(
        frame_len=frame_len, hop=hop, window=np.asarray(window, float), num_frames=num_frames
    )


def split(x: np.ndarray, plan: SegmentationPlan) -> list[np.ndarray]:
    """Extract the plan's frames from x, zero-padding past the signal end."""
    x = np.asarray(x, dtype=float)
    padded = np.zeros(plan.padded_len)
    padded[: len(x)] = x
    return [
        padded[m * plan.hop : m * plan.hop + plan.frame_len].copy()
        for m in range(plan.num_frames)
    ]


def overlap_add(
    frames: list[np.ndarray], plan: SegmentationPlan, original_len: int
) -> np.ndarray:
    """Recombine frames by window weighting with per-sample normalization."""
    if not frames:
        raise ValueError("frame list is empty")
    num = np.zeros(plan.padded_len)
    den = np.zeros(plan.padded_len)
    for m, frame in enumerate(frames):
        frame = np.asarray(frame, dtype=float)
        if frame.shape != (plan.frame_len,):
            raise ValueError(f"frame {m} has shape {frame.shape}")
        lo = m * plan.hop
        num[lo : lo + plan.frame_len] += plan.window * frame
        den[lo : lo + plan.frame_len] += plan.window
    return (num[:original_len] / den[:original_len]).copy()


def restrict_model(
    model: ClipModel, frame_index: int, plan: SegmentationPlan
) -> ClipModel:
    """Clip model for one frame: global masks and y restricted to its range.

    Tail-padding samples beyond the signal are reliable with y = 0.
    """
    if not 0 <= frame_index < plan.num_frames:
        raise ValueError(f"frame index {frame_index} out of range")
    n = plan.frame_len
    lo = frame_index * plan.hop
    avail = max(0, min(len(model), lo + n) - lo)
    y = np.zeros(n)
    mask_r = np.ones(n, dtype=bool)
    mask_h = np.zeros(n, dtype=bool)
    mask_l = np.zeros(n, dtype=bool)
    y[:avail] = model.y[lo : lo + avail]
    mask_r[:avail] = model.mask_r[lo : lo + avail]
    mask_h[:avail] = model.mask_h[lo : lo + avail]
    mask_l[:avail] = model.mask_l[lo : lo + avail]
    return ClipModel(
        y=y, theta=model.theta, mask_r=mask_r, mask_h=mask_h, mask_l=mask_l
    )
