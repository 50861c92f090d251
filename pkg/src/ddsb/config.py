"""Pipeline configuration: every tunable of the detector in one place."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

RATE_MODES = ("counts", "signed-mean")


@dataclass(frozen=True)
class Config:
    """Tunables for the full detection pipeline.

    ``min_area`` of None means 0.5% of the frame's pixel count, resolved per
    sequence. ``alpha`` of None disables the change-magnitude anomaly filter.
    """

    window: int = 31
    offset: float = 5.0
    min_area: int | None = None
    percentile: float = 0.01
    t_a: int = 3
    k: int = 72
    alpha: float | None = 5.0
    rate_mode: str = "counts"
    seed: int = 0

    def validate(self) -> "Config":
        if self.window % 2 == 0 or self.window < 3:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if self.offset < 0:
            raise ValueError(f"offset must be >= 0, got {self.offset}")
        if self.min_area is not None and self.min_area < 0:
            raise ValueError(f"min_area must be >= 0, got {self.min_area}")
        if not 0 < self.percentile < 1:
            raise ValueError(f"percentile must be in (0, 1), got {self.percentile}")
        if self.t_a < 1:
            raise ValueError(f"t_a must be >= 1, got {self.t_a}")
        if self.k < 4:
            raise ValueError(f"k must be >= 4, got {self.k}")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError(f"alpha must be positive or None, got {self.alpha}")
        if self.rate_mode not in RATE_MODES:
            raise ValueError(f"rate_mode must be one of {RATE_MODES}, got {self.rate_mode!r}")
        return self

    def resolved_min_area(self, height: int, width: int) -> int:
        if self.min_area is not None:
            return self.min_area
        return max(1, int(round(0.005 * height * width)))

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "Config":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**values).validate()
