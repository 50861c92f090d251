"""Synthetic echo-like sequences with a pulsating dark cavity.

A single elliptical cavity (low intensity) pulses inside a bright tissue
field following a piecewise-cosine cycle whose maximum falls exactly on the
requested ED frame and minimum on the ES frame, in either order. Ground truth
is therefore known by construction, which makes the detector verifiable
without clinical data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhantomSpec:
    """Parameters of one synthetic sequence.

    ``a0``/``b0`` are the base row/column semi-axes in pixels; the instantaneous
    axes are (a0*f, b0*f) for the pulsation factor f in [1-depth, 1+depth].
    ``center`` of None means the image center. ``flip_prob`` is carried for
    mask-perturbation experiments and does not affect generated frames.
    """

    height: int = 112
    width: int = 112
    frame_count: int = 20
    ed_frame: int = 1
    es_frame: int = 10
    center: tuple[float, float] | None = None
    a0: float = 25.0
    b0: float = 17.0
    depth: float = 0.3
    tissue: float = 200.0
    cavity: float = 30.0
    sigma: float = 0.0
    flip_prob: float = 0.0
    seed: int = 0

    def resolved_center(self) -> tuple[float, float]:
        if self.center is not None:
            return (float(self.center[0]), float(self.center[1]))
        return ((self.height - 1) / 2.0, (self.width - 1) / 2.0)

    def validate(self) -> "PhantomSpec":
        if self.height < 8 or self.width < 8:
            raise ValueError(f"frame must be at least 8x8, got {self.height}x{self.width}")
        if self.frame_count < 2:
            raise ValueError(f"frame_count must be >= 2, got {self.frame_count}")
        for name, idx in (("ed_frame", self.ed_frame), ("es_frame", self.es_frame)):
            if not 1 <= idx <= self.frame_count:
                raise ValueError(f"{name} must be in 1..{self.frame_count}, got {idx}")
        if self.ed_frame == self.es_frame:
            raise ValueError("ed_frame and es_frame must differ")
        if self.a0 <= 0 or self.b0 <= 0:
            raise ValueError(f"semi-axes must be positive, got a0={self.a0}, b0={self.b0}")
        if not 0 <= self.depth < 1:
            raise ValueError(f"depth must be in [0, 1), got {self.depth}")
        for name, v in (("tissue", self.tissue), ("cavity", self.cavity)):
            if not 0 <= v <= 255:
                raise ValueError(f"{name} intensity must be in 0..255, got {v}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not self.cavity + 3 * self.sigma < self.tissue - 3 * self.sigma:
            raise ValueError(
                "cavity and tissue intensities overlap at 3 sigma: "
                f"{self.cavity} + 3*{self.sigma} !< {self.tissue} - 3*{self.sigma}"
            )
        if not 0 <= self.flip_prob < 0.5:
            raise ValueError(f"flip_prob must be in [0, 0.5), got {self.flip_prob}")
        cr, cc = self.resolved_center()
        a_max = self.a0 * (1 + self.depth)
        b_max = self.b0 * (1 + self.depth)
        if (
            cr - a_max < 2
            or cr + a_max > self.height - 3
            or cc - b_max < 2
            or cc + b_max > self.width - 3
        ):
            raise ValueError(
                f"ellipse with max semi-axes ({a_max:.1f}, {b_max:.1f}) at "
                f"({cr:.1f}, {cc:.1f}) leaves less than a 2-pixel margin"
            )
        return self


def pulsation_profile(spec: PhantomSpec) -> np.ndarray:
    """Per-frame scale factor f(t), t = 1..T.

    Piecewise cosine: a half-wave between the two extreme frames and slower
    half-waves before the first and after the last, so f attains 1+depth
    exactly once (at ed_frame) and 1-depth exactly once (at es_frame).
    """
    T = spec.frame_count
    t = np.arange(1, T + 1, dtype=np.float64)
    lo, hi = sorted((spec.ed_frame, spec.es_frame))
    span = hi - lo
    amp_lo = spec.depth if spec.ed_frame == lo else -spec.depth
    f = np.empty(T, dtype=np.float64)
    inner = (t >= lo) & (t <= hi)
    f[inner] = 1.0 + amp_lo * np.cos(np.pi * (t[inner] - lo) / span)
    if lo > 1:
        pre = t < lo
        # half-period longer than the segment keeps it strictly monotone
        h_pre = (lo - 1) + span
        f[pre] = 1.0 + amp_lo * np.cos(np.pi * (t[pre] - lo) / h_pre)
    if hi < T:
        post = t > hi
        h_post = (T - hi) + span
        f[post] = 1.0 - amp_lo * np.cos(np.pi * (t[post] - hi) / h_post)
    return f


def ellipse_interior(shape, center, a: float, b: float) -> np.ndarray:
    """Boolean mask of pixels with ((r-cr)/a)^2 + ((c-cc)/b)^2 <= 1."""
    h, w = shape
    cr, cc = center
    r = np.arange(h, dtype=np.float64)[:, None]
    c = np.arange(w, dtype=np.float64)[None, :]
    return ((r - cr) / a) ** 2 + ((c - cc) / b) ** 2 <= 1.0


@dataclass(frozen=True)
class PhantomSequence:
    """Generated frames plus the noiseless cavity masks and ground truth.

    ``masks`` use the detector's convention: 1 = tissue, 0 = cavity.
    """

    frames: tuple
    masks: tuple
    ed_frame: int
    es_frame: int
    spec: PhantomSpec

    def cavity_areas(self) -> np.ndarray:
        return np.array([int((m == 0).sum()) for m in self.masks], dtype=np.int64)


def generate(spec: PhantomSpec) -> PhantomSequence:
    """Render the sequence; deterministic for a fixed seed.

    Noise is drawn per frame from a (seed, frame) generator, so frames could
    be produced independently without changing the output.
    """
    spec.validate()
    f = pulsation_profile(spec)
    cr, cc = spec.resolved_center()
    shape = (spec.height, spec.width)
    frames = []
    masks = []
    for i in range(spec.frame_count):
        inside = ellipse_interior(shape, (cr, cc), spec.a0 * f[i], spec.b0 * f[i])
        img = np.full(shape, spec.tissue, dtype=np.float64)
        img[inside] = spec.cavity
        if spec.sigma > 0:
            rng = np.random.default_rng([spec.seed, i])
            img += rng.normal(0.0, spec.sigma, size=shape)
        frames.append(np.clip(np.rint(img), 0, 255).astype(np.uint8))
        masks.append(np.where(inside, 0, 1).astype(np.uint8))
    return PhantomSequence(
        frames=tuple(frames),
        masks=tuple(masks),
        ed_frame=spec.ed_frame,
        es_frame=spec.es_frame,
        spec=spec,
    )


def perturb_masks(masks, flip_prob: float, seed: int = 0) -> list:
    """Flip each mask pixel independently with probability ``flip_prob``."""
    if not 0 <= flip_prob < 0.5:
        raise ValueError(f"flip_prob must be in [0, 0.5), got {flip_prob}")
    rng = np.random.default_rng(seed)
    out = []
    for m in masks:
        arr = np.asarray(m)
        flips = rng.random(arr.shape) < flip_prob
        out.append((arr.astype(bool) ^ flips).astype(np.uint8))
    return out
