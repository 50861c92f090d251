"""Command-line front door.

Subcommands: ``detect`` (frame folder -> result JSON / curve CSV / SVG plot),
``phantom`` (synthetic sequence -> frame folder + ground-truth CSV), ``eval``
(prediction JSONs + ground-truth CSV -> MAE report), ``sweep`` (parameter
grid -> machine-readable table).

Exit codes: 0 success, 1 input/parameter error, 2 degenerate detection. The
environment variable DDSB_CONFIG may name a JSON file of config values;
explicit flags override it. All file outputs are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import glob
import json
import os
import sys
from pathlib import Path
from types import SimpleNamespace

from .config import RATE_MODES, Config
from .discriminator import DetectionResult, detect_phases
from .evaluation import build_report, sweep, sweep_table
from .frameio import (
    atomic_write_text,
    read_frames,
    read_ground_truth,
    write_frames,
    write_ground_truth,
)
from .phantom import PhantomSpec, generate
from .plotting import curve_svg

_UNSET = object()

MANIFEST_HEADER = ("sequence_id", "frames_dir", "t_ed", "t_es")


def _parse_alpha(text: str):
    if text.strip().lower() in ("none", "null", "off"):
        return None
    return float(text)


def _parse_grid(text: str, parse_one):
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError(f"empty grid: {text!r}")
    return [parse_one(s) for s in items]


def _add_config_flags(p: argparse.ArgumentParser, grid: bool) -> None:
    p.add_argument("--window", type=int, default=None, help="threshold window size (odd)")
    p.add_argument("--offset", type=float, default=None, help="threshold offset")
    p.add_argument("--min-area", dest="min_area", type=int, default=None,
                   help="small-component cutoff in pixels (default: 0.5%% of frame)")
    p.add_argument("--percentile", type=float, default=None,
                   help="occupancy percentile for anchor candidates")
    p.add_argument("--rate-mode", dest="rate_mode", choices=RATE_MODES, default=None)
    p.add_argument("--seed", type=int, default=None, help="seed echoed into outputs")
    if not grid:
        p.add_argument("--anchors", dest="t_a", type=int, default=None,
                       help="number of anchor bands")
        p.add_argument("--k", type=int, default=None, help="ray directions per anchor")
        p.add_argument("--alpha", type=_parse_alpha, default=_UNSET,
                       help="change-magnitude anomaly threshold, or 'none'")


def _build_config(args) -> Config:
    values: dict = {}
    env_path = os.environ.get("DDSB_CONFIG")
    if env_path:
        try:
            with open(env_path) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read DDSB_CONFIG file {env_path}: {exc}") from exc
        if not isinstance(from_file, dict):
            raise ValueError(f"DDSB_CONFIG file {env_path} must hold a JSON object")
        values.update(from_file)
    for name in ("window", "offset", "min_area", "percentile", "t_a", "k",
                 "rate_mode", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    alpha = getattr(args, "alpha", _UNSET)
    if alpha is not _UNSET:
        values["alpha"] = alpha
    return Config.from_dict(values)


def _result_json(sequence_id: str, result: DetectionResult, cfg: Config) -> str:
    payload = {
        "sequence_id": sequence_id,
        "t_ed": result.t_ed,
        "t_es": result.t_es,
        "objective": result.phase.objective,
        "degenerate": result.degenerate,
        "config": cfg.to_dict(),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _curve_csv(result: DetectionResult) -> str:
    curve = result.curve
    lines = ["frame,E,A,valid_count"]
    T = curve.frame_count
    for m in range(T):
        if m < T - 1:
            e = f"{curve.rates[m]:.10g}"
            vc = "" if curve.valid_counts is None else str(int(curve.valid_counts[m]))
        else:
            e = vc = ""  # frame T starts no transition
        lines.append(f"{m + 1},{e},{curve.cumulative[m]:.10g},{vc}")
    return "\n".join(lines) + "\n"


def cmd_detect(args) -> int:
    cfg = _build_config(args)
    frames, _names = read_frames(args.frames_dir)
    if len(frames) < 3:
        raise ValueError(f"need at least 3 frames, got {len(frames)} in {args.frames_dir}")
    result = detect_phases(frames, cfg)
    sequence_id = Path(args.frames_dir).resolve().name
    text = _result_json(sequence_id, result, cfg)
    sys.stdout.write(text)
    if args.out:
        atomic_write_text(args.out, text)
    if args.curve:
        atomic_write_text(args.curve, _curve_csv(result))
    if args.plot:
        atomic_write_text(args.plot, curve_svg(result, title=sequence_id))
    return 2 if result.degenerate else 0


def cmd_phantom(args) -> int:
    spec = PhantomSpec(
        height=args.height,
        width=args.width,
        frame_count=args.frames,
        ed_frame=args.ed,
        es_frame=args.es,
        a0=args.a0,
        b0=args.b0,
        depth=args.depth,
        tissue=args.tissue,
        cavity=args.cavity,
        sigma=args.sigma,
        seed=args.seed,
    )
    seq = generate(spec)
    out_dir = Path(args.out_dir)
    write_frames(out_dir, seq.frames)
    sequence_id = f"phantom-{spec.seed}"
    write_ground_truth(out_dir / "ground_truth.csv", [(sequence_id, seq.ed_frame, seq.es_frame)])
    print(f"{sequence_id}: {spec.frame_count} frames ({spec.width}x{spec.height}) "
          f"-> {out_dir}  ed={seq.ed_frame} es={seq.es_frame}")
    return 0


def _load_predictions(patterns) -> list[dict]:
    files: list[str] = []
    for pat in patterns:
        matches = sorted(glob.glob(pat))
        if matches:
            files.extend(m for m in matches if m not in files)
        elif os.path.exists(pat):
            if pat not in files:
                files.append(pat)
        else:
            raise ValueError(f"no prediction files match {pat!r}")
    preds = []
    for path in files:
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read prediction {path}: {exc}") from exc
        for key in ("sequence_id", "t_ed", "t_es"):
            if key not in payload:
                raise ValueError(f"prediction {path} lacks {key!r}")
        preds.append(payload)
    return preds


def cmd_eval(args) -> int:
    preds = _load_predictions(args.predictions)
    gt = read_ground_truth(args.gt)
    seen: set = set()
    for p in preds:
        if p["sequence_id"] in seen:
            raise ValueError(f"duplicate prediction for sequence {p['sequence_id']!r}")
        seen.add(p["sequence_id"])
    missing = sorted(s for s in seen if s not in gt)
    if missing:
        raise ValueError(f"sequences missing from ground truth: {', '.join(missing)}")
    samples = []
    for p in preds:
        sid = p["sequence_id"]
        pred = SimpleNamespace(t_ed=int(p["t_ed"]), t_es=int(p["t_es"]),
                               degenerate=bool(p.get("degenerate", False)))
        samples.append((sid, pred, *gt[sid]))
    report = build_report(samples)
    print(report.summary())
    if args.out:
        payload = {
            "mu_ed": report.mu_ed,
            "mu_es": report.mu_es,
            "n": report.n,
            "degenerate": report.degenerate,
            "residuals": [
                {"sequence_id": sid, "ed": ed, "es": es}
                for sid, ed, es in report.residuals
            ],
        }
        atomic_write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def _read_manifest(path) -> list[tuple[str, str, int, int]]:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != MANIFEST_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(MANIFEST_HEADER)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(f.strip() for f in row):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            frames_dir = Path(row[1].strip())
            if not frames_dir.is_absolute():
                frames_dir = path.parent / frames_dir
            rows.append((row[0].strip(), str(frames_dir), int(row[2]), int(row[3])))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def cmd_sweep(args) -> int:
    base = _build_config(args)
    k_values = _parse_grid(args.k_grid, int)
    alpha_values = _parse_grid(args.alpha_grid, _parse_alpha)
    t_a_values = _parse_grid(args.anchors_grid, int)
    sequences = []
    for sid, frames_dir, gt_ed, gt_es in _read_manifest(args.manifest):
        frames, _ = read_frames(frames_dir)
        sequences.append((sid, frames, gt_ed, gt_es))
    rows = sweep(sequences, k_values, alpha_values, t_a_values, base_config=base)
    table = sweep_table(rows)
    sys.stdout.write(table)
    if args.out:
        atomic_write_text(args.out, table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddsb",
        description="Training-free ED/ES frame detection for echo sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect ED/ES in a frame folder")
    p.add_argument("frames_dir", help="directory of .pgm/.png frames (lexicographic order)")
    _add_config_flags(p, grid=False)
    p.add_argument("--out", default=None, help="result JSON path")
    p.add_argument("--curve", default=None, help="curve CSV path (frame,E,A,valid_count)")
    p.add_argument("--plot", default=None, help="SVG plot path")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("phantom", help="generate a synthetic sequence")
    p.add_argument("out_dir", help="output directory for frames + ground_truth.csv")
    p.add_argument("--height", type=int, default=112)
    p.add_argument("--width", type=int, default=112)
    p.add_argument("--frames", type=int, default=20, help="sequence length T")
    p.add_argument("--ed", type=int, default=1, help="ground-truth ED frame (1-based)")
    p.add_argument("--es", type=int, default=10, help="ground-truth ES frame (1-based)")
    p.add_argument("--a0", type=float, default=25.0, help="base row semi-axis")
    p.add_argument("--b0", type=float, default=17.0, help="base column semi-axis")
    p.add_argument("--depth", type=float, default=0.3, help="pulsation depth in [0, 1)")
    p.add_argument("--tissue", type=float, default=200.0)
    p.add_argument("--cavity", type=float, default=30.0)
    p.add_argument("--sigma", type=float, default=0.0, help="Gaussian noise level")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("eval", help="score prediction JSONs against ground truth")
    p.add_argument("predictions", nargs="+", help="prediction JSON files or globs")
    p.add_argument("--gt", required=True, help="ground-truth CSV (sequence_id,t_ed,t_es)")
    p.add_argument("--out", default=None, help="report JSON path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="run a k/alpha/anchors grid over a dataset")
    p.add_argument("manifest", help=f"CSV with header {','.join(MANIFEST_HEADER)}")
    _add_config_flags(p, grid=True)
    p.add_argument("--k", dest="k_grid", default="72", help="comma list of direction counts")
    p.add_argument("--alpha", dest="alpha_grid", default="5",
                   help="comma list of thresholds; 'none' allowed")
    p.add_argument("--anchors", dest="anchors_grid", default="3",
                   help="comma list of band counts")
    p.add_argument("--out", default=None, help="report CSV path")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
