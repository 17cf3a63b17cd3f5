"""Receiver-side image processing.

Finds LED blobs in a frame, measures the stripe run widths along the
read-out axis, recovers the chip stream, synchronizes on the start symbol
and decodes each blob's 5-bit location ID.  Blob geometry (center, radii,
pixel area) feeds the photogrammetric ranging stage.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DomainError, InsufficientDataError, SyncError
from .model import CameraIntrinsics
from .txcodec import FRAME_CHIPS, decode_stream, max_dark_run_chips
from .shutter import FrameScan

# Luminance cut between lit and dark pixels.  A row whose exposure window
# barely clips an on-chip still integrates to 0.5 of full scale, so the
# cut sits below that to keep the bright runs wider than the dark ones.
DEFAULT_LUM_THRESHOLD = 0.25

# Width pivot separating single-chip dark runs from bright runs, in px.
DEFAULT_WIDTH_PIVOT = 4

DEFAULT_MIN_BLOB_AREA = 24
DEFAULT_MIN_RUNS = 12


class Region(enum.Enum):
    """Image quadrants used to explore the ID distribution system."""

    LEFT_FRONT = "LFR"
    FRONT_RIGHT = "FRR"
    RIGHT_BACK = "RBR"
    BACK_LEFT = "BLR"


REGION_ORDER = (Region.LEFT_FRONT, Region.FRONT_RIGHT,
                Region.RIGHT_BACK, Region.BACK_LEFT)


@dataclass
class BlobDetection:
    """One LED region of interest.

    ``area_px`` counts the filled (stripe-bridged) blob; ``major_r`` /
    ``minor_r`` come from the fitted row/column extents.  ``profile`` is
    the on/off sequence along the read-out axis through the blob center.
    """

    center_px: tuple[float, float]
    area_px: int
    major_r: float
    minor_r: float
    profile: np.ndarray
    bbox: tuple[int, int, int, int]          # (row0, row1, col0, col1)
    lit_area_px: int = 0


@dataclass
class DecodedLed:
    bits: int
    blob: BlobDetection
    region: Region


def assign_region(center_px: tuple[float, float], cam: CameraIntrinsics) -> Region:
    """Quadrant of the blob center; each quadrant holds equal pixels."""
    cr, cc = cam.img_rows / 2.0, cam.img_cols / 2.0
    front = center_px[0] >= cr      # +row is the robot's front
    right = center_px[1] >= cc      # +col is the robot's right
    if front and not right:
        return Region.LEFT_FRONT
    if front and right:
        return Region.FRONT_RIGHT
    if not front and right:
        return Region.RIGHT_BACK
    return Region.BACK_LEFT


def _close_rows(mask: np.ndarray, gap: int) -> np.ndarray:
    """Bridge dark stripe gaps along the read-out axis (closing)."""
    structure = np.ones((gap, 1), dtype=bool)
    dilated = ndimage.binary_dilation(mask, structure=structure)
    return ndimage.binary_erosion(dilated, structure=structure,
                                  border_value=1)


def detect_rois(
    frame: FrameScan,
    lum_threshold: float = DEFAULT_LUM_THRESHOLD,
    chip_rows: float | None = None,
    min_area: int = DEFAULT_MIN_BLOB_AREA,
) -> list[BlobDetection]:
    """Connected LED blobs, largest first.

    Stripes must not split a blob, so connectivity is computed after
    closing the mask along the read-out axis by the longest dark run a
    codeword can produce.  ``chip_rows`` (rows per chip) sizes that gap;
    when omitted it is derived from the frame timing assuming the 4 kHz
    default chip clock.
    """
    if not 0.0 < lum_threshold < 1.0:
        raise DomainError("luminance threshold must lie in (0, 1)")
    if chip_rows is None:
        chip_rows = (1.0 / 4000.0) / frame.row_time_s
    gap = int(math.ceil(max_dark_run_chips() * chip_rows)) + 1

    mask = frame.data > lum_threshold
    closed = _close_rows(mask, gap)
    four_conn = ndimage.generate_binary_structure(2, 1)
    labels, count = ndimage.label(closed, structure=four_conn)
    blobs: list[BlobDetection] = []
    for idx, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        comp = labels[sl] == idx
        area = int(comp.sum())
        if area < min_area:
            continue
        r0, r1 = sl[0].start, sl[0].stop - 1
        c0, c1 = sl[1].start, sl[1].stop - 1
        center = ((r0 + r1) / 2.0, (c0 + c1) / 2.0)
        major = (r1 - r0 + 1) / 2.0
        minor = (c1 - c0 + 1) / 2.0
        if minor > major:
            major, minor = minor, major
        lit = mask[sl] & comp
        col = int(np.argmax(lit.sum(axis=0)))
        rows_lit = np.nonzero(lit[:, col])[0]
        profile = np.zeros(0, dtype=bool)
        if rows_lit.size:
            profile = lit[rows_lit[0]: rows_lit[-1] + 1, col]
        blobs.append(BlobDetection(
            center_px=center, area_px=area, major_r=major, minor_r=minor,
            profile=profile, bbox=(r0, r1, c0, c1),
            lit_area_px=int(lit.sum()),
        ))
    blobs.sort(key=lambda b: -b.area_px)
    return blobs


def run_lengths(profile: np.ndarray) -> tuple[list[int], list[bool]]:
    """Run-length encode an on/off profile: (widths, levels)."""
    profile = np.asarray(profile, dtype=bool)
    if profile.size == 0:
        return [], []
    change = np.nonzero(np.diff(profile))[0] + 1
    bounds = np.concatenate(([0], change, [profile.size]))
    widths = np.diff(bounds).tolist()
    levels = [bool(profile[b]) for b in bounds[:-1]]
    return widths, levels


def measure_stripes(
    profile: np.ndarray,
    min_runs: int = DEFAULT_MIN_RUNS,
) -> list[int]:
    """Interior stripe widths along the blob center line.

    The first and last runs abut the blob edge, where rows integrate a
    truncated exposure, so they are discarded.  Raises when fewer than
    ``min_runs`` full runs remain.
    """
    profile = np.asarray(profile, dtype=bool)
    if profile.size == 0:
        raise InsufficientDataError("empty stripe profile")
    widths, _ = run_lengths(profile)
    interior = widths[1:-1]
    if len(interior) < min_runs:
        raise InsufficientDataError(
            f"{len(interior)} full runs, need at least {min_runs}"
        )
    return interior


def widths_to_chips(widths, pivot: int = DEFAULT_WIDTH_PIVOT) -> tuple[int, ...]:
    """One chip per run: strictly wider than the pivot reads as on."""
    return tuple(1 if w > pivot else 0 for w in widths)


def runs_to_chips(
    widths: list[int],
    levels: list[bool],
    chip_rows: float,
    smear_rows: float,
) -> tuple[int, ...]:
    """Quantize stripe runs to whole chips.

    Exposure smearing widens every bright run by about ``smear_rows`` and
    narrows each dark run by the same amount; the corrected width divided
    by the nominal rows-per-chip gives the chip count of the run.
    """
    chips: list[int] = []
    for w, lit in zip(widths, levels):
        corrected = w - smear_rows if lit else w + smear_rows
        n = max(1, round(corrected / chip_rows))
        chips.extend([1 if lit else 0] * n)
    return tuple(chips)


def _decode_profile(
    profile: np.ndarray,
    chip_rows: float,
    smear_rows: float,
) -> int:
    if profile.size == 0:
        raise InsufficientDataError("empty stripe profile")
    widths, levels = run_lengths(profile)
    if len(widths) < 3:
        raise SyncError("no interior stripe runs in blob")
    chips = runs_to_chips(widths[1:-1], levels[1:-1], chip_rows, smear_rows)
    if len(chips) < FRAME_CHIPS:
        raise InsufficientDataError(
            f"{len(chips)} chips in blob, need {FRAME_CHIPS}"
        )
    return decode_stream(chips[:FRAME_CHIPS], circular=True)


def decode_blob(
    blob: BlobDetection,
    chip_rows: float,
    smear_rows: float = 1.0,
) -> int:
    """Recover the 5-bit ID carried by one blob.

    Interior runs are quantized to chips; because the transmission repeats
    every 12 chips, any 12 consecutive chips are a rotation of the framed
    codeword and the start symbol pins down the rotation.
    """
    return _decode_profile(blob.profile, chip_rows, smear_rows)


def extent_profile(
    frame: FrameScan,
    blob: BlobDetection,
    lum_threshold: float = DEFAULT_LUM_THRESHOLD,
) -> np.ndarray:
    """Stripe profile through a blob's center column over its full extent.

    ``blob`` normally comes from a stripe-filling composite while the
    profile is read from one striped ``frame`` of the same scene.  Bounding
    the profile by the composite extent (instead of the frame's own lit
    pixels) leaves partial runs at the edges, so the interior runs can
    cover a whole codeword even when the codeword is mostly dark.
    """
    r0, r1, c0, c1 = blob.bbox
    col = min(max(int(round(blob.center_px[1])), c0), c1)
    return frame.data[r0:r1 + 1, col] > lum_threshold


def decode_extent(
    frame: FrameScan,
    blob: BlobDetection,
    chip_rows: float,
    smear_rows: float = 1.0,
    lum_threshold: float = DEFAULT_LUM_THRESHOLD,
) -> int:
    """Decode one striped frame inside a composite-detected blob."""
    return _decode_profile(extent_profile(frame, blob, lum_threshold),
                           chip_rows, smear_rows)


def decode_frame(
    frame: FrameScan,
    cam: CameraIntrinsics,
    chip_rate_hz: float = 4000.0,
    lum_threshold: float = DEFAULT_LUM_THRESHOLD,
    geometry_frame: FrameScan | None = None,
) -> list[DecodedLed]:
    """Detect and decode every readable LED in a frame.

    Undecodable blobs are dropped (the caller can retry on a later
    frame).  When ``geometry_frame`` is given (a stripe-filling composite
    of several frames), blob geometry is measured on it while the chip
    stream still comes from the striped ``frame``.
    """
    chip_rows = (1.0 / chip_rate_hz) / frame.row_time_s
    smear_rows = max(0.0, round(frame.exposure_s / frame.row_time_s) - 1.0)

    decoded: list[DecodedLed] = []
    if geometry_frame is not None:
        geo_blobs = detect_rois(geometry_frame, lum_threshold,
                                chip_rows=chip_rows)
        for geo in geo_blobs:
            try:
                bits = decode_extent(frame, geo, chip_rows, smear_rows,
                                     lum_threshold)
            except (InsufficientDataError, SyncError):
                continue
            decoded.append(DecodedLed(bits=bits, blob=geo,
                                      region=assign_region(geo.center_px,
                                                           cam)))
    else:
        for blob in detect_rois(frame, lum_threshold, chip_rows=chip_rows):
            try:
                bits = decode_blob(blob, chip_rows, smear_rows)
            except (InsufficientDataError, SyncError):
                continue
            decoded.append(DecodedLed(bits=bits, blob=blob,
                                      region=assign_region(blob.center_px,
                                                           cam)))
    order = {region: k for k, region in enumerate(REGION_ORDER)}
    decoded.sort(key=lambda d: (order[d.region], d.blob.center_px))
    return decoded


def throughput_bps(
    n_leds: int = 4,
    payload_bits: int = 5,
    fps: float = 20.0,
    frames_per_bit: int = 2,
) -> float:
    """Aggregate data rate under the frame-budget accounting.

    Acquiring one codeword is budgeted at two camera frames per payload
    bit (one per chip), so each LED delivers its 5 bits every
    ``payload_bits * frames_per_bit`` frames.
    """
    time_per_codeword = payload_bits * frames_per_bit / fps
    return n_leds * payload_bits / time_per_codeword
