"""World model: ceiling LED grid, camera intrinsics, robot pose, ID codec.

Units: world lengths in cm, focal length and sensor dimensions in mm,
image coordinates in px.  All types are immutable value objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

ID_BITS = 5
MAX_IDS = 1 << ID_BITS  # 32


@dataclass(frozen=True)
class LedGridConfig:
    """Square ceiling grid of downward-facing circular LEDs.

    The LED with cell (i, j) sits at ``origin + (i*spacing, j*spacing)``
    on a ceiling plane ``ceiling_height_cm`` above the camera plane.
    """

    origin_xy: tuple[float, float] = (0.0, 0.0)
    spacing_cm: float = 50.0
    nx: int = 4
    ny: int = 8
    ceiling_height_cm: float = 256.0
    led_diameter_cm: float = 9.5
    led_area_cm2: float = 71.0

    def __post_init__(self):
        if self.spacing_cm <= self.led_diameter_cm:
            raise DomainError(
                f"LED spacing {self.spacing_cm} cm must exceed the LED "
                f"diameter {self.led_diameter_cm} cm"
            )
        if self.nx < 1 or self.ny < 1:
            raise DomainError("grid counts must be positive")
        if self.nx * self.ny > MAX_IDS:
            raise DomainError(
                f"grid has {self.nx * self.ny} cells; the 5-bit ID space "
                f"holds at most {MAX_IDS}"
            )
        for name in ("spacing_cm", "ceiling_height_cm", "led_diameter_cm",
                     "led_area_cm2"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")

    @property
    def n_ids(self) -> int:
        return self.nx * self.ny


@dataclass(frozen=True)
class CameraIntrinsics:
    """Upward-facing rolling-shutter camera.

    The sensor raster is stored in read-out orientation: ``img_rows`` rows
    scanned sequentially (one row per ``row_time_s``), ``img_cols`` columns.
    ``sensor_dh_mm`` spans the row axis and ``sensor_dv_mm`` the column
    axis.  The display orientation rotates this raster by ``rotation_deg``
    clockwise, which is how the stripes end up vertical on screen.
    """

    focal_mm: float = 4.2
    sensor_dh_mm: float = 4.0
    sensor_dv_mm: float = 3.0
    img_rows: int = 800
    img_cols: int = 600
    fps: float = 20.0
    exposure_s: float = 1.0 / 8000.0
    rotation_deg: int = 270

    def __post_init__(self):
        if self.focal_mm <= 0:
            raise DomainError("focal length must be positive")
        if self.img_rows <= 0 or self.img_cols <= 0:
            raise DomainError("image dimensions must be positive")
        if self.sensor_dh_mm <= 0 or self.sensor_dv_mm <= 0:
            raise DomainError("sensor dimensions must be positive")
        if self.fps <= 0:
            raise DomainError("frame rate must be positive")
        if not 0 < self.exposure_s < 1.0 / self.fps:
            raise DomainError("exposure must lie in (0, frame period)")
        if self.rotation_deg not in (0, 90, 180, 270):
            raise DomainError("rotation must be one of 0/90/180/270")

    @property
    def row_time_s(self) -> float:
        """Per-row read-out interval; the full raster spans one frame."""
        return 1.0 / (self.fps * self.img_rows)

    @property
    def pitch_row_mm(self) -> float:
        return self.sensor_dh_mm / self.img_rows

    @property
    def pitch_col_mm(self) -> float:
        return self.sensor_dv_mm / self.img_cols

    @property
    def center_px(self) -> tuple[float, float]:
        return ((self.img_rows - 1) / 2.0, (self.img_cols - 1) / 2.0)


@dataclass(frozen=True)
class RobotPose:
    """Floor position of the robot; the camera rides at fixed height."""

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0


@dataclass(frozen=True)
class LocationId:
    """5-bit LED identity tied to a grid cell."""

    bits: int
    cell: tuple[int, int]

    def __post_init__(self):
        if not 0 <= self.bits < MAX_IDS:
            raise DomainError(f"id bits {self.bits} outside 5-bit range")


def cell_of_bits(bits: int, grid: LedGridConfig) -> tuple[int, int]:
    """Row-major bits -> cell: i = bits % nx, j = bits // nx."""
    if not 0 <= bits < grid.n_ids:
        raise DomainError(
            f"id {bits} outside configured grid ({grid.n_ids} cells)"
        )
    return (bits % grid.nx, bits // grid.nx)


def bits_of_cell(cell: tuple[int, int], grid: LedGridConfig) -> int:
    """Inverse of :func:`cell_of_bits`."""
    i, j = cell
    if not (0 <= i < grid.nx and 0 <= j < grid.ny):
        raise DomainError(f"cell {cell} outside {grid.nx}x{grid.ny} grid")
    return j * grid.nx + i


def location_id(bits: int, grid: LedGridConfig) -> LocationId:
    return LocationId(bits=bits, cell=cell_of_bits(bits, grid))


def led_world_position(
    grid: LedGridConfig, lid: LocationId
) -> tuple[float, float, float]:
    """3D position (cm) of an LED; z is the height above the camera plane."""
    i, j = lid.cell
    if not (0 <= i < grid.nx and 0 <= j < grid.ny):
        raise DomainError(f"cell {lid.cell} outside {grid.nx}x{grid.ny} grid")
    ox, oy = grid.origin_xy
    return (ox + i * grid.spacing_cm, oy + j * grid.spacing_cm,
            grid.ceiling_height_cm)


def led_floor_position(grid: LedGridConfig, lid: LocationId) -> tuple[float, float]:
    """Point on the floor directly below an LED."""
    x, y, _ = led_world_position(grid, lid)
    return (x, y)


def direct_distance_to(pose: RobotPose, led_pos: tuple[float, float, float]) -> float:
    """Straight-line camera-to-LED distance in cm."""
    dx = led_pos[0] - pose.x
    dy = led_pos[1] - pose.y
    return math.sqrt(dx * dx + dy * dy + led_pos[2] * led_pos[2])
