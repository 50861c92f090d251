"""Self-contained vector plot of the detector's curves.

Emits a single SVG string (no display server, no plotting dependency) with
the per-transition rate E, the cumulative curve A, and vertical ED/ES
markers. Deterministic: equal inputs give byte-identical output.
"""

from __future__ import annotations

import numpy as np

from .discriminator import DetectionResult

_W, _H = 720, 400
_L, _R, _T, _B = 54, 16, 18, 42


def _f(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def curve_svg(result: DetectionResult, title: str = "") -> str:
    curve = result.curve
    a = np.asarray(curve.cumulative, dtype=np.float64)
    e = np.asarray(curve.rates, dtype=np.float64)
    T = a.size
    lo = float(min(a.min(), e.min(), 0.0))
    hi = float(max(a.max(), e.max(), 0.0))
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    def sx(frame: float) -> float:  # frame in 1..T
        return _L + (frame - 1.0) / max(T - 1, 1) * (_W - _L - _R)

    def sy(v: float) -> float:
        return _T + (hi - v) / (hi - lo) * (_H - _T - _B)

    def polyline(xs, ys, color: str) -> str:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in zip(xs, ys))
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    # frame for the plot area and the zero line
    out.append(
        f'<rect x="{_L}" y="{_T}" width="{_W - _L - _R}" height="{_H - _T - _B}" '
        'fill="none" stroke="#444444" stroke-width="1"/>'
    )
    if lo < 0 < hi:
        y0 = sy(0.0)
        out.append(
            f'<line x1="{_L}" y1="{_f(y0)}" x2="{_W - _R}" y2="{_f(y0)}" '
            'stroke="#bbbbbb" stroke-width="1" stroke-dasharray="2,3"/>'
        )
    for v in _ticks(lo, hi):
        y = sy(v)
        out.append(
            f'<line x1="{_L - 4}" y1="{_f(y)}" x2="{_L}" y2="{_f(y)}" '
            'stroke="#444444" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_L - 7}" y="{_f(y + 3.5)}" font-size="10" '
            f'font-family="sans-serif" text-anchor="end">{_f(v)}</text>'
        )
    n_xticks = min(T, 8)
    for frame in sorted({int(round(x)) for x in np.linspace(1, T, n_xticks)}):
        x = sx(frame)
        out.append(
            f'<line x1="{_f(x)}" y1="{_H - _B}" x2="{_f(x)}" y2="{_H - _B + 4}" '
            'stroke="#444444" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_f(x)}" y="{_H - _B + 16}" font-size="10" '
            f'font-family="sans-serif" text-anchor="middle">{frame}</text>'
        )
    out.append(
        f'<text x="{(_L + _W - _R) // 2}" y="{_H - 8}" font-size="11" '
        'font-family="sans-serif" text-anchor="middle">frame</text>'
    )
    # ED/ES markers under the curves
    for label, frame, color in (
        ("ED", result.t_ed, "#2ca02c"),
        ("ES", result.t_es, "#d62728"),
    ):
        x = sx(frame)
        out.append(
            f'<line x1="{_f(x)}" y1="{_T}" x2="{_f(x)}" y2="{_H - _B}" '
            f'stroke="{color}" stroke-width="1.2" stroke-dasharray="5,3"/>'
        )
        out.append(
            f'<text x="{_f(x + 3)}" y="{_T + 12}" font-size="11" '
            f'font-family="sans-serif" fill="{color}">{label} t={frame}</text>'
        )
    # E_j sits between frames j and j+1
    out.append(polyline([sx(j + 1.5) for j in range(T - 1)], [sy(v) for v in e], "#ff7f0e"))
    out.append(polyline([sx(m + 1.0) for m in range(T)], [sy(v) for v in a], "#1f77b4"))
    lx = _W - _R - 150
    out.append(
        f'<rect x="{lx}" y="{_T + 6}" width="12" height="3" fill="#1f77b4"/>'
        f'<text x="{lx + 17}" y="{_T + 12}" font-size="11" font-family="sans-serif">'
        "A (cumulative)</text>"
    )
    out.append(
        f'<rect x="{lx}" y="{_T + 22}" width="12" height="3" fill="#ff7f0e"/>'
        f'<text x="{lx + 17}" y="{_T + 28}" font-size="11" font-family="sans-serif">'
        "E (rate)</text>"
    )
    if title:
        out.append(
            f'<text x="{_L + 4}" y="{_T - 5}" font-size="12" '
            f'font-family="sans-serif">{title}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
