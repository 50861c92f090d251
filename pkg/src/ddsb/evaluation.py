"""Evaluation harness: MAE, the size-based baseline, splice-flip, sweeps.

MAE is reported in frames, separately for ED and ES. Degenerate detections
are excluded from the means and surfaced as a count so the metric stays a
plain mean over successful sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .anchors import AnchorSet
from .config import Config
from .discriminator import PhaseResult, detect_phases, _round_half_up
from .imgproc import as_binary_mask, label_components

SWEEP_HEADER = ("k", "alpha", "t_a", "mu_ed", "mu_es", "n", "degenerate")


@dataclass(frozen=True)
class AnnotatedSequence:
    """One evaluation sample: where its frames live and its true indices."""

    sequence_id: str
    frames_dir: str
    gt_ed: int
    gt_es: int


@dataclass(frozen=True)
class EvalReport:
    mu_ed: float
    mu_es: float
    n: int
    degenerate: int
    residuals: tuple = ()  # (sequence_id, ed_residual, es_residual) triples
    config: dict | None = None

    def summary(self) -> str:
        return (
            f"mu_ed={self.mu_ed:.2f} mu_es={self.mu_es:.2f} "
            f"n={self.n} degenerate={self.degenerate}"
        )


def mae(pairs) -> float:
    """Mean absolute difference over (predicted, true) index pairs."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("mae needs at least one sample")
    return float(np.mean([abs(int(p) - int(t)) for p, t in pairs]))


def build_report(samples, config: Config | None = None) -> EvalReport:
    """Aggregate (sequence_id, prediction-or-None, gt_ed, gt_es) samples.

    A ``None`` prediction (or one flagged degenerate) counts toward
    ``degenerate`` and is excluded from both means.
    """
    residuals = []
    degenerate = 0
    for sid, pred, gt_ed, gt_es in samples:
        if pred is None or pred.degenerate:
            degenerate += 1
            continue
        residuals.append((sid, abs(pred.t_ed - gt_ed), abs(pred.t_es - gt_es)))
    if residuals:
        mu_ed = float(np.mean([r[1] for r in residuals]))
        mu_es = float(np.mean([r[2] for r in residuals]))
    else:
        mu_ed = mu_es = float("nan")
    return EvalReport(
        mu_ed=mu_ed,
        mu_es=mu_es,
        n=len(residuals),
        degenerate=degenerate,
        residuals=tuple(residuals),
        config=None if config is None else config.to_dict(),
    )


def size_based_detect(masks, anchors: AnchorSet) -> PhaseResult:
    """Baseline: track the cavity area at the primary anchor per frame.

    Area is the 8-connected 0-component containing the rounded middle-band
    anchor (0 when that pixel is 1); ED is the largest-area frame, ES the
    smallest, earliest frame on ties. A flat area curve is degenerate.
    """
    mats = [as_binary_mask(m) for m in masks]
    if len(mats) < 3:
        raise ValueError(f"need at least 3 masks, got {len(mats)}")
    pr, pc = (_round_half_up(v) for v in anchors.primary)
    areas = np.zeros(len(mats), dtype=np.int64)
    for t, m in enumerate(mats):
        if m[pr, pc] != 0:
            continue
        comp = label_components(m, value=0, connectivity=8)
        areas[t] = comp.areas[int(comp.labels[pr, pc])]
    t_ed = int(areas.argmax()) + 1
    t_es = int(areas.argmin()) + 1
    if t_ed == t_es:  # constant curve: argmax == argmin only then
        return PhaseResult(t_ed=1, t_es=2, i0=1, j0=2, objective=0.0, degenerate=True)
    spread = float(areas.max() - areas.min())
    i0, j0 = min(t_ed, t_es), max(t_ed, t_es)
    objective = spread if t_ed == i0 else -spread
    return PhaseResult(t_ed=t_ed, t_es=t_es, i0=i0, j0=j0, objective=objective, degenerate=False)


def splice_flip_at(frames, labels, u: int, v: int):
    """Reverse frames u..v (1-based, inclusive) and remap labels into the flip."""
    frames = list(frames)
    T = len(frames)
    if not (1 <= u < v <= T and v - u >= 2):
        raise ValueError(f"need 1 <= u < v <= {T} with v-u >= 2, got ({u}, {v})")
    flipped = frames[: u - 1] + frames[u - 1 : v][::-1] + frames[v:]
    remapped = tuple(u + v - g if u <= g <= v else g for g in labels)
    return flipped, remapped


def splice_flip(frames, labels, seed: int = 0):
    """Seeded random splice flip; returns (frames, labels, (u, v)).

    (u, v) is drawn uniformly from all pairs with v - u >= 2, so repeated runs
    vary the sequence while keeping the frame multiset intact.
    """
    T = len(frames)
    if T < 4:
        raise ValueError(f"need at least 4 frames, got {T}")
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(1, T - 1) for v in range(u + 2, T + 1)]
    u, v = pairs[int(rng.integers(len(pairs)))]
    flipped, remapped = splice_flip_at(frames, labels, u, v)
    return flipped, remapped, (u, v)


def sweep(sequences, k_values, alpha_values, t_a_values=(3,), base_config: Config | None = None):
    """Grid-run the detector; one report row per (k, alpha, t_a) cell.

    ``sequences``: iterable of (sequence_id, frames, gt_ed, gt_es). Failures
    of individual sequences are folded into the degenerate count, never abort
    the sweep. Returns rows shaped like SWEEP_HEADER.
    """
    k_values = list(k_values)
    alpha_values = list(alpha_values)
    t_a_values = list(t_a_values)
    if not k_values or not alpha_values or not t_a_values:
        raise ValueError("sweep grids must be nonempty")
    seqs = list(sequences)
    base = base_config or Config()
    rows = []
    for k in k_values:
        for alpha in alpha_values:
            for t_a in t_a_values:
                cfg = base.replace(k=k, alpha=alpha, t_a=t_a).validate()
                samples = []
                for sid, frames, gt_ed, gt_es in seqs:
                    try:
                        pred = detect_phases(frames, cfg).phase
                    except ValueError:
                        pred = None
                    samples.append((sid, pred, gt_ed, gt_es))
                report = build_report(samples, cfg)
                rows.append(
                    {
                        "k": k,
                        "alpha": alpha,
                        "t_a": t_a,
                        "mu_ed": report.mu_ed,
                        "mu_es": report.mu_es,
                        "n": report.n,
                        "degenerate": report.degenerate,
                    }
                )
    return rows


def sweep_table(rows) -> str:
    """Render sweep rows as the machine-readable CSV table."""
    lines = [",".join(SWEEP_HEADER)]
    for r in rows:
        alpha = "none" if r["alpha"] is None else f"{r['alpha']:g}"
        mu_ed = "nan" if np.isnan(r["mu_ed"]) else f"{r['mu_ed']:.4f}"
        mu_es = "nan" if np.isnan(r["mu_es"]) else f"{r['mu_es']:.4f}"
        lines.append(
            f"{r['k']},{alpha},{r['t_a']},{mu_ed},{mu_es},{r['n']},{r['degenerate']}"
        )
    return "\n".join(lines) + "\n"
