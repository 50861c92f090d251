"""Frame-folder and CSV input/output.

Sequences are directories of grayscale images (binary portable graymap or
portable network graphics) processed in lexicographic filename order;
multi-channel images are converted by luminance, not rejected. Ground truth
travels in CSV files with the header ``sequence_id,t_ed,t_es``; frame indices
are 1-based in every file format. All writes go through a temp file and an
atomic rename.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from .imgproc import as_gray_frame

FRAME_SUFFIXES = (".pgm", ".png")
GROUND_TRUTH_HEADER = ("sequence_id", "t_ed", "t_es")


def atomic_write_bytes(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def pgm_bytes(frame) -> bytes:
    f = as_gray_frame(frame, min_side=1)
    h, w = f.shape
    return b"P5\n%d %d\n255\n" % (w, h) + f.tobytes()


def write_pgm(path, frame) -> None:
    """Binary portable graymap, maxval 255; byte-identical for equal frames."""
    atomic_write_bytes(path, pgm_bytes(frame))


def read_frame(path) -> np.ndarray:
    """Load one image as a uint8 grayscale array, converting by luminance."""
    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.mode != "L":
                img = img.convert("L")
            arr = np.asarray(img, dtype=np.uint8)
    except ValueError:
        raise
    except Exception as exc:
        raise ValueError(f"cannot read frame {path}: {exc}") from exc
    if arr.ndim != 2:
        raise ValueError(f"cannot read frame {path}: not a single-channel image")
    return arr


def list_frame_files(directory) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise ValueError(f"not a directory: {d}")
    files = [p for p in d.iterdir() if p.suffix.lower() in FRAME_SUFFIXES and p.is_file()]
    return sorted(files, key=lambda p: p.name)


def read_frames(directory) -> tuple[list[np.ndarray], list[str]]:
    """All frames of a directory in lexicographic name order, plus the names.

    Mixed frame sizes are an input error naming the offending file.
    """
    files = list_frame_files(directory)
    if not files:
        raise ValueError(f"no .pgm/.png frames in {directory}")
    frames = []
    for p in files:
        arr = read_frame(p)
        if frames and arr.shape != frames[0].shape:
            raise ValueError(
                f"frame {p} has size {arr.shape[1]}x{arr.shape[0]}, "
                f"expected {frames[0].shape[1]}x{frames[0].shape[0]} ({files[0].name})"
            )
        frames.append(arr)
    return frames, [p.name for p in files]


def write_frames(directory, frames, stem: str = "frame") -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(len(frames))))
    paths = []
    for i, frame in enumerate(frames, start=1):
        p = d / f"{stem}_{i:0{width}d}.pgm"
        write_pgm(p, frame)
        paths.append(p)
    return paths


def ground_truth_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(GROUND_TRUTH_HEADER)
    for sequence_id, t_ed, t_es in rows:
        writer.writerow([sequence_id, int(t_ed), int(t_es)])
    return buf.getvalue()


def write_ground_truth(path, rows) -> None:
    """Rows of (sequence_id, t_ed, t_es); indices 1-based."""
    atomic_write_text(path, ground_truth_csv(rows))


def read_ground_truth(path) -> dict[str, tuple[int, int]]:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty ground-truth file") from None
        if tuple(h.strip() for h in header) != GROUND_TRUTH_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(GROUND_TRUTH_HEADER)}, "
                f"got {','.join(header)}"
            )
        out: dict[str, tuple[int, int]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(field.strip() for field in row):
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            sid = row[0].strip()
            try:
                ed, es = int(row[1]), int(row[2])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer frame index") from None
            if sid in out:
                raise ValueError(f"{path}:{lineno}: duplicate sequence_id {sid!r}")
            out[sid] = (ed, es)
    if not out:
        raise ValueError(f"{path}: no data rows")
    return out
