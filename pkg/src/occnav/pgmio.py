"""Frame persistence: binary PGM images plus a JSON sidecar.

The sidecar records the scan timing and the ground-truth ellipse
geometry of every rendered LED so decoded measurements can be checked
against what the renderer actually drew.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ScanError
from .shutter import EllipseProjection, FrameScan


def write_pgm(path: str | Path, frame: FrameScan) -> None:
    """Store the luminance raster as 8-bit binary PGM (P5)."""
    data = np.clip(np.round(frame.data * 255.0), 0, 255).astype(np.uint8)
    rows, cols = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    """Load a binary PGM back to a float raster in [0, 1]."""
    with open(path, "rb") as fh:
        raw = fh.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos] in b" \t\r\n":
            pos += 1
        if pos < len(raw) and raw[pos:pos + 1] == b"#":
            while pos < len(raw) and raw[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and raw[pos] not in b" \t\r\n":
            pos += 1
        fields.append(raw[start:pos])
    if fields[0] != b"P5":
        raise ScanError(f"not a binary PGM: magic {fields[0]!r}")
    cols, rows, maxval = (int(f) for f in fields[1:])
    if maxval != 255:
        raise ScanError(f"unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after the header
    pixels = np.frombuffer(raw, dtype=np.uint8, count=rows * cols, offset=pos)
    return pixels.reshape(rows, cols).astype(np.float64) / 255.0


def write_sidecar(
    path: str | Path,
    frame: FrameScan,
    truth: list[tuple[int, EllipseProjection]] | None = None,
) -> None:
    """JSON sidecar: timing metadata and optional LED ground truth."""
    doc = {
        "t0_s": frame.t0,
        "row_time_s": frame.row_time_s,
        "exposure_s": frame.exposure_s,
        "shape": list(frame.data.shape),
        "leds": [
            {
                "bits": bits,
                "center_px": list(proj.center_px),
                "major_r_px": proj.major_r,
                "minor_r_px": proj.minor_r,
                "area_px": proj.area_px,
            }
            for bits, proj in (truth or [])
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_sidecar(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_frame(pgm_path: str | Path, sidecar_path: str | Path) -> FrameScan:
    """Rehydrate a FrameScan from its PGM + sidecar pair."""
    meta = read_sidecar(sidecar_path)
    data = read_pgm(pgm_path)
    if list(data.shape) != meta["shape"]:
        raise ScanError("sidecar shape does not match the PGM raster")
    return FrameScan(data=data, t0=meta["t0_s"],
                     row_time_s=meta["row_time_s"],
                     exposure_s=meta["exposure_s"])
