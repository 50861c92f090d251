"""Pixel-level primitives for cavity segmentation.

Grayscale frames are plain 2-D uint8 arrays (0..255); binary masks are 2-D
uint8 arrays where 0 marks cavity (dark blood pool) and 1 marks tissue or
anything else that is present. Everything here is a pure function of its
inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

# Sequence-level pipeline minimum; single-frame primitives only require that
# the requested window fits.
MIN_FRAME_SIDE = 8

_STRUCTURE_4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
_STRUCTURE_8 = np.ones((3, 3), dtype=bool)


def as_gray_frame(frame, min_side: int = MIN_FRAME_SIDE) -> np.ndarray:
    """Validate a grayscale frame and return it as a 2-D uint8 array."""
    a = np.asarray(frame)
    if a.ndim != 2:
        raise ValueError(f"frame must be 2-D grayscale, got shape {a.shape}")
    if a.shape[0] < min_side or a.shape[1] < min_side:
        raise ValueError(
            f"frame must be at least {min_side}x{min_side}, got {a.shape[0]}x{a.shape[1]}"
        )
    if a.dtype != np.uint8:
        arr = np.asarray(a, dtype=np.float64)
        if np.any(arr < 0) or np.any(arr > 255):
            raise ValueError("frame intensities must lie in 0..255")
        if not np.all(arr == np.round(arr)):
            raise ValueError("frame intensities must be integral")
        a = arr.astype(np.uint8)
    return a


def as_binary_mask(mask) -> np.ndarray:
    """Validate a binary mask (values exactly 0/1) and return it as uint8."""
    a = np.asarray(mask)
    if a.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {a.shape}")
    if a.dtype == bool:
        return a.astype(np.uint8)
    if a.dtype == np.uint8:
        if a.max(initial=0) > 1:
            raise ValueError("mask values must be exactly 0 or 1")
        return a
    if not np.isin(a, (0, 1)).all():
        raise ValueError("mask values must be exactly 0 or 1")
    return a.astype(np.uint8)


def adaptive_threshold(frame, window: int = 31, offset: float = 5.0) -> np.ndarray:
    """Binarize a frame against its local mean.

    A pixel becomes 0 (cavity) iff its intensity is strictly below the
    arithmetic mean of its window x window neighborhood minus ``offset``;
    otherwise 1. Borders are handled by edge replication. Window sums are
    accumulated exactly in int64, so the output is invariant to adding a
    constant to every intensity.
    """
    f = as_gray_frame(frame, min_side=3)
    h, w = f.shape
    if window % 2 == 0 or window < 3 or window > min(h, w):
        raise ValueError(
            f"window must be odd and within [3, {min(h, w)}], got {window}"
        )
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset}")

    half = window // 2
    padded = np.pad(f.astype(np.int64), half, mode="edge")
    sat = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.int64)
    sat[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    sums = (
        sat[window:, window:]
        - sat[:-window, window:]
        - sat[window:, :-window]
        + sat[:-window, :-window]
    )

    # pixel < mean - offset  <=>  (pixel + offset) * window^2 < window sum
    out = np.ones((h, w), dtype=np.uint8)
    out[(f.astype(np.float64) + float(offset)) * (window * window) < sums] = 0
    return out


@dataclass(frozen=True)
class ComponentLabeling:
    """Connected components of one mask value.

    ``labels`` holds a dense component id (1..n) per pixel of the queried
    value and 0 elsewhere; ``areas`` maps each id to its pixel count.
    """

    labels: np.ndarray
    areas: dict
    connectivity: int

    @property
    def count(self) -> int:
        return len(self.areas)


def _structure(connectivity: int) -> np.ndarray:
    if connectivity == 4:
        return _STRUCTURE_4
    if connectivity == 8:
        return _STRUCTURE_8
    raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")


def label_components(mask, value: int, connectivity: int = 8) -> ComponentLabeling:
    """Label the connected components of pixels equal to ``value``."""
    m = as_binary_mask(mask)
    if value not in (0, 1):
        raise ValueError(f"value must be 0 or 1, got {value}")
    labels, n = ndimage.label(m == value, structure=_structure(connectivity))
    counts = np.bincount(labels.ravel(), minlength=n + 1)
    areas = {lab: int(counts[lab]) for lab in range(1, n + 1)}
    return ComponentLabeling(labels=labels.astype(np.int32), areas=areas, connectivity=connectivity)


def filter_small_components(mask, min_area: int) -> np.ndarray:
    """Drop 1-components (8-connectivity) smaller than ``min_area`` pixels.

    Removed pixels become 0 (cavity); 0-pixels are never touched, so the
    operation is idempotent and monotone toward cavity.
    """
    if min_area < 0:
        raise ValueError(f"min_area must be >= 0, got {min_area}")
    m = as_binary_mask(mask).copy()
    if min_area <= 1:
        return m
    labels, n = ndimage.label(m == 1, structure=_STRUCTURE_8)
    if n == 0:
        return m
    counts = np.bincount(labels.ravel(), minlength=n + 1)
    small = counts < min_area
    small[0] = False
    m[small[labels]] = 0
    return m
