"""Anchor-point selection from the temporal occupancy of cavity masks.

Pixels that are rarely cavity across the whole sequence sit deep inside the
ventricle for almost every frame; the most persistent of those, grouped into a
connected region near the top-center of the image, give stable anchor points
for ray casting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .imgproc import as_binary_mask, label_components


def temporal_occupancy(masks) -> np.ndarray:
    """Per-pixel count of frames in which the pixel is tissue (value 1).

    ``masks``: sequence of equally shaped binary masks, at least 2 of them.
    """
    mats = [as_binary_mask(m) for m in masks]
    if len(mats) < 2:
        raise ValueError(f"need at least 2 masks, got {len(mats)}")
    shape = mats[0].shape
    for i, m in enumerate(mats[1:], start=1):
        if m.shape != shape:
            raise ValueError(f"mask {i} has shape {m.shape}, expected {shape}")
    out = np.zeros(shape, dtype=np.int32)
    for m in mats:
        out += m
    return out


def candidate_mask(occupancy, percentile: float = 0.01) -> np.ndarray:
    """Mark pixels whose occupancy is within the lowest ``percentile`` of values.

    Threshold is the nearest-rank percentile: the ceil(percentile * n)-th
    smallest occupancy value. All pixels at or below it are candidates, so the
    selected fraction can exceed ``percentile`` when values tie.
    """
    occ = np.asarray(occupancy)
    if occ.ndim != 2:
        raise ValueError(f"occupancy must be 2-D, got {occ.ndim}-D")
    if not 0 < percentile < 1:
        raise ValueError(f"percentile must be in (0, 1), got {percentile}")
    flat = np.sort(occ, axis=None)
    rank = max(1, math.ceil(percentile * flat.size))
    threshold = flat[rank - 1]
    return (occ <= threshold).astype(np.uint8)


def select_anchor_region(candidates) -> np.ndarray:
    """Pick one connected candidate component as the anchor region.

    Among the 4 largest components (8-connectivity), returns the one whose
    centroid is closest to the top-center point (row 0, col width/2); ties go
    to the larger area, then the smaller label. Result is a boolean mask.
    """
    cand = as_binary_mask(candidates)
    comp = label_components(cand, value=1, connectivity=8)
    if comp.count == 0:
        raise ValueError("candidate mask has no components")
    order = sorted(comp.areas, key=lambda lab: (-comp.areas[lab], lab))[:4]
    w = cand.shape[1]
    top = np.array([0.0, w / 2.0])
    best = None
    for lab in order:
        rows, cols = np.nonzero(comp.labels == lab)
        centroid = np.array([rows.mean(), cols.mean()])
        d = float(np.hypot(*(centroid - top)))
        key = (d, -comp.areas[lab], lab)
        if best is None or key < best[0]:
            best = (key, lab)
    return comp.labels == best[1]


@dataclass(frozen=True)
class AnchorSet:
    """Anchor points carved out of one anchor region.

    ``anchors`` are (row, col) centroids ordered top band first. Length can be
    less than ``requested_bands`` when some bands were empty.
    """

    region: np.ndarray
    anchors: tuple[tuple[float, float], ...]
    requested_bands: int

    @property
    def band_count(self) -> int:
        return len(self.anchors)

    @property
    def primary(self) -> tuple[float, float]:
        # middle anchor; for even counts, the earlier of the two middles
        return self.anchors[(len(self.anchors) - 1) // 2]


def band_anchors(region, t_a: int = 3) -> AnchorSet:
    """Split the region into ``t_a`` horizontal bands; one centroid per band.

    Bands partition the rows the region actually spans. When the span does not
    divide evenly the earlier bands take one extra row each. Bands containing
    no region pixel are skipped with a warning.
    """
    reg = np.asarray(region)
    if reg.ndim != 2:
        raise ValueError(f"region must be 2-D, got {reg.ndim}-D")
    reg = reg.astype(bool)
    if t_a < 1:
        raise ValueError(f"t_a must be >= 1, got {t_a}")
    rows = np.nonzero(reg.any(axis=1))[0]
    if rows.size == 0:
        raise ValueError("region is empty")
    r_lo, r_hi = int(rows[0]), int(rows[-1])
    span = r_hi - r_lo + 1
    base, rem = divmod(span, t_a)
    anchors = []
    start = r_lo
    for b in range(t_a):
        height = base + (1 if b < rem else 0)
        stop = start + height
        band = reg[start:stop]
        rr, cc = np.nonzero(band)
        if rr.size == 0:
            warnings.warn(f"band {b} of {t_a} contains no region pixels; skipped")
        else:
            anchors.append((float(rr.mean() + start), float(cc.mean())))
        start = stop
    if not anchors:
        raise ValueError("all bands empty")  # unreachable: region has pixels
    return AnchorSet(region=reg, anchors=tuple(anchors), requested_bands=t_a)
