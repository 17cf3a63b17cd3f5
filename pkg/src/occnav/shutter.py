"""Rolling-shutter camera simulation.

LEDs project onto the sensor as ellipses (foreshortened off-axis) and the
sequential row read-out samples each LED's on/off waveform, producing the
characteristic bright/dark stripe pattern inside every blob.

The raster is rendered in read-out orientation: row v is exposed over
[t0 + v*row_time, t0 + v*row_time + exposure].  World y maps to the row
axis (robot "front" is +row) and world x to the column axis ("right" is
+col), so orientation inference over image quadrants matches the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import CameraIntrinsics, LedGridConfig, RobotPose, \
    led_world_position, location_id
from .txcodec import Waveform

# Rendered blobs are larger than the geometric pinhole image: a bright LED
# saturates and bleeds into neighboring pixels.  Modeled as a uniform
# scale on the projected ellipse.
DEFAULT_GLOW = 2.5


@dataclass(frozen=True)
class EllipseProjection:
    """Geometric image of one circular LED.

    Radii are in px; the major radius lies along the read-out (row) axis
    and the foreshortened minor radius along the column axis.
    """

    center_px: tuple[float, float]   # (row, col)
    major_r: float
    minor_r: float

    @property
    def area_px(self) -> float:
        return math.pi * self.major_r * self.minor_r

    def scaled(self, factor: float) -> "EllipseProjection":
        return EllipseProjection(self.center_px, self.major_r * factor,
                                 self.minor_r * factor)


@dataclass(frozen=True)
class FrameScan:
    """One captured frame: per-pixel luminance in [0, 1].

    ``data`` has shape (rows, cols) in read-out orientation unless the
    frame has been rotated for display, in which case ``row_time_s`` no
    longer describes axis 0.
    """

    data: np.ndarray
    t0: float
    row_time_s: float
    exposure_s: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def project_led(
    pose: RobotPose,
    cam: CameraIntrinsics,
    led_pos: tuple[float, float, float],
    led_diameter_cm: float,
) -> EllipseProjection | None:
    """Pinhole projection of an LED disc; None when outside the frame.

    The off-axis tilt foreshortens the disc into an ellipse: one radius
    stays f*R/D while the other shrinks by cos(theta) = h/D.  Ellipse
    orientation is not tracked; the major radius is laid along the
    read-out axis.
    """
    dx = led_pos[0] - pose.x
    dy = led_pos[1] - pose.y
    h = led_pos[2]
    if h <= 0:
        raise DomainError("LED plane must be above the camera")
    dist = math.sqrt(dx * dx + dy * dy + h * h)

    cr, cc = cam.center_px
    # world y -> rows, world x -> cols; cm cancels against cm.
    row = cr + (dy * cam.focal_mm / h) / cam.pitch_row_mm
    col = cc + (dx * cam.focal_mm / h) / cam.pitch_col_mm
    if not (0 <= row < cam.img_rows and 0 <= col < cam.img_cols):
        return None

    # disc radius in mm on the sensor; cm -> mm for the world radius.
    radius_mm = cam.focal_mm * (led_diameter_cm * 10.0 / 2.0) / (dist * 10.0)
    major = radius_mm / cam.pitch_row_mm
    minor = major * (h / dist) * (cam.pitch_row_mm / cam.pitch_col_mm)
    return EllipseProjection(center_px=(row, col), major_r=major,
                             minor_r=minor)


def render_frame(
    scene: list[tuple[EllipseProjection, Waveform]],
    cam: CameraIntrinsics,
    t0: float = 0.0,
    glow: float = DEFAULT_GLOW,
    noise_sigma: float = 0.0,
    rng: np.random.Generator | None = None,
) -> FrameScan:
    """Render one rolling-shutter frame of a set of modulated LEDs.

    Row v of a blob carries the waveform's mean level over that row's
    exposure window; everything outside the blobs is black (the short
    exposure suppresses the background).
    """
    rows, cols = cam.img_rows, cam.img_cols
    data = np.zeros((rows, cols), dtype=float)
    rt = cam.row_time_s
    exp = cam.exposure_s

    for ellipse, waveform in scene:
        er, ec = ellipse.center_px
        rr = ellipse.major_r * glow
        rc = ellipse.minor_r * glow
        v0 = max(0, int(math.ceil(er - rr)))
        v1 = min(rows - 1, int(math.floor(er + rr)))
        if v1 < v0:
            continue
        v = np.arange(v0, v1 + 1)
        starts = t0 + v * rt
        levels = waveform.mean_level(starts, starts + exp)
        # per-row half width of the ellipse along the column axis
        frac = np.clip(1.0 - ((v - er) / rr) ** 2, 0.0, None)
        half = rc * np.sqrt(frac)
        u0 = np.maximum(0, np.ceil(ec - half).astype(int))
        u1 = np.minimum(cols - 1, np.floor(ec + half).astype(int))
        for k in range(len(v)):
            if u1[k] >= u0[k] and levels[k] > 0:
                row = data[v[k], u0[k]: u1[k] + 1]
                np.maximum(row, levels[k], out=row)

    if noise_sigma > 0.0:
        if rng is None:
            rng = np.random.default_rng(0)
        data = np.clip(data + rng.normal(0.0, noise_sigma, data.shape),
                       0.0, 1.0)
    return FrameScan(data=data, t0=t0, row_time_s=rt, exposure_s=exp)


def apply_rotation(frame: FrameScan, degrees: int | None = 270) -> FrameScan:
    """Rotate a raster clockwise for display (stripes become vertical).

    For 270 degrees clockwise on an HxW raster, pixel (u, v) maps to
    (W-1-v, u).  Rotated frames are display artifacts; axis 0 no longer
    follows the read-out clock.
    """
    if degrees not in (0, 90, 180, 270):
        raise DomainError(f"unsupported rotation {degrees}")
    k = (degrees // 90) % 4          # np.rot90 rotates CCW; cw k == ccw 4-k
    data = np.rot90(frame.data, k=(4 - k) % 4).copy()
    return FrameScan(data=data, t0=frame.t0, row_time_s=frame.row_time_s,
                     exposure_s=frame.exposure_s)


def visible_leds(
    grid: LedGridConfig,
    cam: CameraIntrinsics,
    pose: RobotPose,
    led_diameter_cm: float | None = None,
) -> list[tuple[int, EllipseProjection]]:
    """All grid LEDs whose projected center falls inside the frame."""
    diameter = grid.led_diameter_cm if led_diameter_cm is None else led_diameter_cm
    out = []
    for bits in range(grid.n_ids):
        lid = location_id(bits, grid)
        proj = project_led(pose, cam, led_world_position(grid, lid), diameter)
        if proj is not None:
            out.append((bits, proj))
    return out


def stratified_burst(
    scene: list[tuple[EllipseProjection, Waveform]],
    cam: CameraIntrinsics,
    t0: float = 0.0,
    n_frames: int = 6,
    glow: float = DEFAULT_GLOW,
    noise_sigma: float = 0.0,
    rng: np.random.Generator | None = None,
) -> list[FrameScan]:
    """Consecutive frames with stripe phases spread over the codeword.

    Frame start times carry a small deterministic jitter on top of the
    nominal frame period so the stripe pattern advances by 1/n_frames of
    the codeword per frame.  The camera clock is never exactly periodic
    relative to the transmitters, and this sampling lets a compositing
    receiver see every part of each blob lit in at least one frame.
    """
    if not scene:
        return [render_frame([], cam, t0 + k / cam.fps, glow, noise_sigma, rng)
                for k in range(n_frames)]
    period = scene[0][1].period_s
    frame_t = 1.0 / cam.fps
    # jitter makes the inter-frame stripe phase advance exactly 1/n of
    # a codeword period
    jitter = (period / n_frames - frame_t % period) % period
    frames = []
    for k in range(n_frames):
        tk = t0 + k * (frame_t + jitter)
        frames.append(render_frame(scene, cam, tk, glow, noise_sigma, rng))
    return frames


def composite_max(frames: list[FrameScan]) -> FrameScan:
    """Per-pixel maximum across frames; fills in the dark stripes."""
    if not frames:
        raise DomainError("no frames to composite")
    data = frames[0].data.copy()
    for f in frames[1:]:
        np.maximum(data, f.data, out=data)
    first = frames[0]
    return FrameScan(data=data, t0=first.t0, row_time_s=first.row_time_s,
                     exposure_s=first.exposure_s)
