"""Directional expansion/contraction discrimination.

Rays cast from anchor points measure the distance to the cavity boundary in k
directions per frame. Differencing consecutive frames gives signed change
elements; their per-transition majority vote is the expansion rate E_j, whose
running sum A_j traces the cardiac cycle. The (ED, ES) pair maximizes
|2*A_i - 2*A_j + A_T| over i < j.

Invalid measurements (ray exits the image) are carried as NaN and never
contribute to any aggregate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .anchors import AnchorSet, band_anchors, candidate_mask, select_anchor_region, temporal_occupancy
from .config import Config
from .imgproc import as_binary_mask, as_gray_frame, adaptive_threshold, filter_small_components

RAY_STEP = 0.5
RATE_GUARD = 1e-6


def directions(k: int) -> np.ndarray:
    """The k ray angles 2*pi*k0/k for k0 = 1..k, in radians."""
    if k < 4:
        raise ValueError(f"k must be >= 4, got {k}")
    return 2.0 * np.pi * np.arange(1, k + 1, dtype=np.float64) / k


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def ray_distances(mask, anchor, thetas) -> np.ndarray:
    """March rays from ``anchor`` and return the distance to the first 1-pixel.

    Each ray advances in 0.5-pixel steps along (sin theta, cos theta), rounding
    every sample to the nearest pixel; the returned value is the march distance
    at the first sample whose pixel is 1, NaN if the ray leaves the image
    first, and 0 for every direction when the anchor's own pixel is 1.
    """
    m = as_binary_mask(mask)
    h, w = m.shape
    ar, ac = float(anchor[0]), float(anchor[1])
    pr, pc = _round_half_up(ar), _round_half_up(ac)
    if not (0 <= pr < h and 0 <= pc < w):
        raise ValueError(f"anchor ({ar}, {ac}) outside {h}x{w} image")
    th = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if m[pr, pc] == 1:
        return np.zeros(th.shape, dtype=np.float64)
    # t <= hypot(h, w) for any in-bounds sample; +2 steps of slack
    n_steps = int(math.ceil(math.hypot(h, w) / RAY_STEP)) + 2
    t = RAY_STEP * np.arange(1, n_steps + 1, dtype=np.float64)
    rows = np.floor(ar + np.sin(th)[:, None] * t[None, :] + 0.5).astype(np.int64)
    cols = np.floor(ac + np.cos(th)[:, None] * t[None, :] + 0.5).astype(np.int64)
    inside = (rows >= 0) & (rows < h) & (cols >= 0) & (cols < w)
    inside = np.logical_and.accumulate(inside, axis=1)  # stop at first exit
    vals = m[np.clip(rows, 0, h - 1), np.clip(cols, 0, w - 1)]
    hit = (vals == 1) & inside
    first = hit.argmax(axis=1)
    dist = t[first]
    dist[~hit.any(axis=1)] = np.nan
    return dist


def ray_distance(mask, anchor, theta: float) -> float:
    """Single-direction form of :func:`ray_distances`; NaN means no boundary."""
    return float(ray_distances(mask, anchor, [theta])[0])


def _distance_table(mask, anchors: AnchorSet, thetas) -> np.ndarray:
    return np.stack([ray_distances(mask, a, thetas) for a in anchors.anchors])


def deltas_for_transition(mask_j, mask_j1, anchors: AnchorSet, k: int = 72) -> np.ndarray:
    """Signed boundary-distance changes frame j -> j+1, shape (k, n_anchors).

    Positive entries mean the boundary moved outward (expansion). Entries where
    either ray was invalid are NaN.
    """
    a = as_binary_mask(mask_j)
    b = as_binary_mask(mask_j1)
    if a.shape != b.shape:
        raise ValueError(f"mask shapes differ: {a.shape} vs {b.shape}")
    thetas = directions(k)
    return (_distance_table(b, anchors, thetas) - _distance_table(a, anchors, thetas)).T


def _valid_mask(deltas: np.ndarray, alpha: float | None) -> np.ndarray:
    valid = np.isfinite(deltas)
    if alpha is not None:
        if alpha <= 0:
            raise ValueError(f"alpha must be positive or None, got {alpha}")
        valid &= np.abs(deltas) < alpha
    return valid


def expansion_rate(deltas, alpha: float | None = 5.0, mode: str = "counts") -> float:
    """Aggregate one transition's deltas into a rate.

    ``counts`` (the default): (#positive - #negative) / (#valid + 1e-6), which
    lands in (-1, 1). ``signed-mean``: sum of valid deltas over the same
    guarded denominator. Deltas with |delta| >= alpha are anomalies and do not
    count as valid; alpha=None disables that filter. Zero deltas count toward
    the denominator only.
    """
    d = np.asarray(deltas, dtype=np.float64)
    valid = _valid_mask(d, alpha)
    n_valid = int(valid.sum())
    dv = d[valid]
    if mode == "counts":
        num = float(np.count_nonzero(dv > 0) - np.count_nonzero(dv < 0))
    elif mode == "signed-mean":
        num = float(dv.sum())
    else:
        raise ValueError(f"unknown rate mode {mode!r}")
    return num / (n_valid + RATE_GUARD)


@dataclass(frozen=True)
class ExpansionCurve:
    """Per-transition rates E_1..E_{T-1} and cumulative values A_1..A_T.

    A_1 = 0 and A_m = sum of the first m-1 rates, so A_{m+1} - A_m = E_m.
    ``valid_counts`` (optional) carries the per-transition |V| used by the
    rates.
    """

    rates: np.ndarray
    cumulative: np.ndarray
    valid_counts: np.ndarray | None = None

    @property
    def frame_count(self) -> int:
        return int(self.cumulative.size)


def cumulative_curve(rates, valid_counts=None) -> ExpansionCurve:
    """Prefix-sum the rates into an ExpansionCurve; needs >= 2 rates."""
    r = np.asarray(rates, dtype=np.float64)
    if r.ndim != 1:
        raise ValueError(f"rates must be 1-D, got {r.ndim}-D")
    if r.size < 2:
        raise ValueError(f"need >= 2 rates (>= 3 frames), got {r.size}")
    cum = np.empty(r.size + 1, dtype=np.float64)
    cum[0] = 0.0
    np.cumsum(r, out=cum[1:])
    counts = None
    if valid_counts is not None:
        counts = np.asarray(valid_counts, dtype=np.int64)
        if counts.shape != r.shape:
            raise ValueError("valid_counts must align with rates")
    return ExpansionCurve(rates=r, cumulative=cum, valid_counts=counts)


@dataclass(frozen=True)
class PhaseResult:
    """ED/ES frame indices (1-based) with the raw argmax pair behind them.

    ``objective`` is 2*A_i0 - 2*A_j0 + A_T; its sign decides which of (i0, j0)
    is ED. A zero maximum means the curve carries no phase information and
    ``degenerate`` is set.
    """

    t_ed: int
    t_es: int
    i0: int
    j0: int
    objective: float
    degenerate: bool


def find_phase_pair(curve: ExpansionCurve) -> PhaseResult:
    """Interval search for the phase pair on the cumulative curve.

    Maximizes |2*A_i - 2*A_j + A_T| over i < j; ties go to the smallest i,
    then the smallest j. Exhaustive over all pairs: a prefix-extrema scan
    finds the same maximum VALUE, but under float rounding a non-extremal
    A_i can tie the objective bitwise, which would break the documented
    lexicographic tie-break. T is a heartbeat's frame count, so the O(T^2)
    table is nothing.
    """
    a = np.asarray(curve.cumulative, dtype=np.float64)
    n = a.size
    if n < 3:
        raise ValueError(f"need >= 3 cumulative values, got {n}")
    objective = 2.0 * a[:, None] - 2.0 * a[None, :] + a[-1]
    g = np.abs(objective)
    g[np.tril_indices(n)] = -np.inf  # keep i < j only
    flat = int(np.argmax(g))  # first maximum in row-major order = (min i, min j)
    bi, bj = divmod(flat, n)
    best_f = float(objective[bi, bj])
    i0, j0 = bi + 1, bj + 1
    if best_f > 0:
        t_ed, t_es = i0, j0
    elif best_f < 0:
        t_ed, t_es = j0, i0
    else:
        t_ed, t_es = i0, j0
    return PhaseResult(
        t_ed=t_ed,
        t_es=t_es,
        i0=i0,
        j0=j0,
        objective=best_f,
        degenerate=(best_f == 0.0),
    )


@dataclass(frozen=True)
class DetectionResult:
    """Everything one pipeline run produces."""

    phase: PhaseResult
    curve: ExpansionCurve
    anchors: AnchorSet

    @property
    def t_ed(self) -> int:
        return self.phase.t_ed

    @property
    def t_es(self) -> int:
        return self.phase.t_es

    @property
    def degenerate(self) -> bool:
        return self.phase.degenerate


def _detect_from_filtered(masks: list, config: Config) -> DetectionResult:
    occ = temporal_occupancy(masks)
    cand = candidate_mask(occ, config.percentile)
    region = select_anchor_region(cand)
    aset = band_anchors(region, config.t_a)
    thetas = directions(config.k)
    tables = [_distance_table(m, aset, thetas) for m in masks]
    rates = []
    counts = []
    for j in range(len(masks) - 1):
        delta = tables[j + 1] - tables[j]
        rates.append(expansion_rate(delta, config.alpha, config.rate_mode))
        counts.append(int(_valid_mask(delta, config.alpha).sum()))
    curve = cumulative_curve(rates, valid_counts=counts)
    return DetectionResult(phase=find_phase_pair(curve), curve=curve, anchors=aset)


def detect_phases(frames, config: Config | None = None) -> DetectionResult:
    """Run the full pipeline on grayscale frames.

    Segmentation -> small-component filtering -> occupancy/anchors ->
    per-transition ray deltas -> rates -> cumulative curve -> phase pair.
    Deterministic for a fixed config. A degenerate (all-zero) curve is
    reported via the result, never silently replaced by a guess.
    """
    cfg = (config or Config()).validate()
    grays = [as_gray_frame(f) for f in frames]
    if len(grays) < 3:
        raise ValueError(f"need at least 3 frames, got {len(grays)}")
    shape = grays[0].shape
    for i, g in enumerate(grays[1:], start=1):
        if g.shape != shape:
            raise ValueError(f"frame {i} has shape {g.shape}, expected {shape}")
    min_area = cfg.resolved_min_area(*shape)
    filtered = [
        filter_small_components(adaptive_threshold(g, cfg.window, cfg.offset), min_area)
        for g in grays
    ]
    return _detect_from_filtered(filtered, cfg)


def detect_phases_from_masks(masks, config: Config | None = None) -> DetectionResult:
    """Run the pipeline on precomputed cavity masks (1 = tissue, 0 = cavity).

    Replaces only the thresholding stage; the small-component filter still
    applies, so speckle-level mask noise is cleaned the same way segmentation
    output would be.
    """
    cfg = (config or Config()).validate()
    bins = [as_binary_mask(m) for m in masks]
    if len(bins) < 3:
        raise ValueError(f"need at least 3 masks, got {len(bins)}")
    shape = bins[0].shape
    for i, b in enumerate(bins[1:], start=1):
        if b.shape != shape:
            raise ValueError(f"mask {i} has shape {b.shape}, expected {shape}")
    min_area = cfg.resolved_min_area(*shape)
    filtered = [filter_small_components(b, min_area) for b in bins]
    return _detect_from_filtered(filtered, cfg)
