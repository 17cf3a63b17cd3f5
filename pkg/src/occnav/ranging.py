"""Geometry and ranging math.

Field-of-view angles and footprint, expected vs. brute-force LED counts,
photogrammetric direct distance from detected pixel area, the
ellipse-minor-radius correction table, and the horizontal move distance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

from .errors import DomainError
from .model import CameraIntrinsics, LedGridConfig, RobotPose
from .shutter import project_led, visible_leds


@dataclass(frozen=True)
class FovSpec:
    phi_h: float          # radians
    phi_v: float
    area_cm2: float
    n_led_expected: float


def fov_angles(cam: CameraIntrinsics) -> tuple[float, float]:
    """Full view angles: phi = 2*atan(d / 2f) per sensor axis."""
    phi_h = 2.0 * math.atan(cam.sensor_dh_mm / (2.0 * cam.focal_mm))
    phi_v = 2.0 * math.atan(cam.sensor_dv_mm / (2.0 * cam.focal_mm))
    return phi_h, phi_v


def fov_area(h_cm: float, phi_h: float, phi_v: float) -> float:
    """Ceiling-plane view area as 4*h^2*tan(phi_v)*tan(phi_h).

    Note the full angles sit inside the tangents, which overestimates the
    true footprint; see :func:`fov_footprint_geometric` for the variant
    with half angles.
    """
    for phi in (phi_h, phi_v):
        if not 0.0 < phi < math.pi / 2.0:
            raise DomainError(
                "view angle must lie in (0, pi/2); tangent is singular"
            )
    return 4.0 * h_cm * h_cm * math.tan(phi_v) * math.tan(phi_h)


def fov_footprint_geometric(h_cm: float, phi_h: float, phi_v: float) -> float:
    """Exact rectangular footprint: 4*h^2*tan(phi_v/2)*tan(phi_h/2)."""
    for phi in (phi_h, phi_v):
        if not 0.0 < phi < math.pi:
            raise DomainError("view angle must lie in (0, pi)")
    return 4.0 * h_cm * h_cm * math.tan(phi_v / 2.0) * math.tan(phi_h / 2.0)


def expected_led_count(
    h_cm: float, phi_h: float, phi_v: float, spacing_cm: float,
    geometric: bool = False,
) -> float:
    """Predicted LEDs in view: footprint / spacing^2 (each LED owns a^2)."""
    if spacing_cm <= 0:
        raise DomainError("spacing must be positive")
    area = (fov_footprint_geometric if geometric else fov_area)(
        h_cm, phi_h, phi_v)
    return area / (spacing_cm * spacing_cm)


def brute_force_led_count(
    grid: LedGridConfig, cam: CameraIntrinsics, pose: RobotPose
) -> int:
    """Count LEDs whose projected center lands inside the image."""
    return len(visible_leds(grid, cam, pose))


def led_count_boundary_term(
    h_cm: float, phi_h: float, phi_v: float, spacing_cm: float
) -> float:
    """Counting slack for LEDs straddling the footprint boundary."""
    w = 2.0 * h_cm * math.tan(phi_h / 2.0)
    v = 2.0 * h_cm * math.tan(phi_v / 2.0)
    return 2.0 * (w + v) / spacing_cm + 4.0


@dataclass(frozen=True)
class Calibration:
    """Single-constant bridge between px^2 areas and cm distances.

    D = K / sqrt(area_px), with K fitted from one known (distance, area)
    pair; K absorbs the focal length, the LED's physical area and the
    pixel pitch.
    """

    k: float

    @classmethod
    def from_reference(cls, distance_cm: float, area_px: float) -> "Calibration":
        if distance_cm <= 0 or area_px <= 0:
            raise DomainError("reference distance and area must be positive")
        return cls(k=distance_cm * math.sqrt(area_px))


def direct_distance(area_px: float, cal: Calibration) -> float:
    """Photogrammetric distance from apparent pixel area."""
    if area_px <= 0:
        raise DomainError("detected area must be positive")
    return cal.k / math.sqrt(area_px)


@dataclass(frozen=True)
class RadiusCorrectionTable:
    """Off-axis correction lookup recorded over a horizontal sweep.

    Each row stores the detected blob geometry at a known floor offset
    together with the distance the receiver should report there.  The
    lookup key is the *effective* minor radius area/(pi*major): the
    printed minor radii are integer-rounded and not injective, while the
    effective radius decreases strictly along the sweep.
    """

    horizontal_cm: tuple[float, ...]
    measured_cm: tuple[float, ...]
    actual_cm: tuple[float, ...]
    area_px: tuple[float, ...]
    major_r_px: tuple[float, ...]
    minor_r_px: tuple[float, ...]

    def __post_init__(self):
        n = len(self.horizontal_cm)
        if n == 0:
            raise DomainError("correction table is empty")
        if any(len(col) != n for col in (
                self.measured_cm, self.actual_cm, self.area_px,
                self.major_r_px, self.minor_r_px)):
            raise DomainError("correction table columns differ in length")
        if any(b <= a for a, b in zip(self.horizontal_cm,
                                      self.horizontal_cm[1:])):
            raise DomainError("horizontal distances must strictly increase")
        if any(b > a for a, b in zip(self.area_px, self.area_px[1:])):
            raise DomainError("detected area must not grow with offset")

    def effective_minor(self, row: int) -> float:
        return self.area_px[row] / (math.pi * self.major_r_px[row])

    @property
    def keys(self) -> list[float]:
        return [self.effective_minor(i) for i in range(len(self.horizontal_cm))]

    def corrected_distance(self, effective_minor_px: float) -> float:
        """Interpolate measured distance over the effective minor radius.

        Clamped to the end rows outside the tabulated range.
        """
        if effective_minor_px <= 0:
            raise DomainError("minor radius must be positive")
        keys = self.keys                     # strictly decreasing
        if effective_minor_px >= keys[0]:
            return self.measured_cm[0]
        if effective_minor_px <= keys[-1]:
            return self.measured_cm[-1]
        for i in range(len(keys) - 1):
            hi, lo = keys[i], keys[i + 1]
            if lo <= effective_minor_px <= hi:
                t = (hi - effective_minor_px) / (hi - lo)
                return (1 - t) * self.measured_cm[i] + t * self.measured_cm[i + 1]
        raise DomainError("correction lookup failed")  # pragma: no cover


def ellipse_corrected_distance(blob, table: RadiusCorrectionTable) -> float:
    """Range a detected blob through the correction table.

    Accepts anything with ``area_px`` and ``major_r`` attributes (a
    BlobDetection or an EllipseProjection-like record).
    """
    major = getattr(blob, "major_r")
    area = getattr(blob, "area_px")
    if major <= 0 or area <= 0:
        raise DomainError("degenerate blob geometry")
    return table.corrected_distance(area / (math.pi * major))


def horizontal_distance(direct_cm: float, height_cm: float) -> float:
    """Right-triangle floor distance: s = sqrt(D^2 - h^2)."""
    if direct_cm < height_cm:
        raise DomainError(
            f"direct distance {direct_cm} below ceiling height {height_cm}"
        )
    return math.sqrt(direct_cm * direct_cm - height_cm * height_cm)


def accuracy_report(table: RadiusCorrectionTable) -> list[dict]:
    """Per-row percent accuracy of the measured distances."""
    rows = []
    for i, h in enumerate(table.horizontal_cm):
        measured, actual = table.measured_cm[i], table.actual_cm[i]
        accuracy = 100.0 * (1.0 - abs(measured - actual) / actual)
        rows.append({
            "horizontal_cm": h,
            "measured_cm": measured,
            "actual_cm": actual,
            "accuracy_pct": accuracy,
        })
    return rows


def load_reference_table() -> RadiusCorrectionTable:
    """The packaged single-LED sweep fixture (CSV shipped with the code)."""
    path = resources.files("occnav.data").joinpath("table1.csv")
    with path.open("r", encoding="utf-8") as fh:
        return read_table_csv(fh)


def read_table_csv(fh) -> RadiusCorrectionTable:
    rows = list(csv.DictReader(fh))
    if not rows:
        raise DomainError("empty correction table CSV")
    return RadiusCorrectionTable(
        horizontal_cm=tuple(float(r["horizontal_cm"]) for r in rows),
        measured_cm=tuple(float(r["measured_cm"]) for r in rows),
        actual_cm=tuple(float(r["actual_cm"]) for r in rows),
        area_px=tuple(float(r["area_px"]) for r in rows),
        major_r_px=tuple(float(r["major_r_px"]) for r in rows),
        minor_r_px=tuple(float(r["minor_r_px"]) for r in rows),
    )


def table_from_camera(
    cam: CameraIntrinsics,
    height_cm: float,
    led_diameter_cm: float,
    glow: float = 1.0,
    max_horizontal_cm: float = 250.0,
    step_cm: float = 2.0,
) -> RadiusCorrectionTable:
    """Synthesize a dense correction table from the projection model.

    Used to calibrate ranging for a simulated camera; the measured column
    equals the true distance because the model has no systematic error.
    """
    horizontal, measured, actual, areas, majors, minors = \
        [], [], [], [], [], []
    pose = RobotPose(0.0, 0.0)
    cr, cc = cam.center_px
    n = int(max_horizontal_cm / step_cm) + 1
    for i in range(n):
        s = i * step_cm
        proj = _project_unclipped(pose, cam, (0.0, s, height_cm),
                                  led_diameter_cm)
        d = math.sqrt(s * s + height_cm * height_cm)
        horizontal.append(s)
        measured.append(d)
        actual.append(d)
        areas.append(proj.area_px * glow * glow)
        majors.append(proj.major_r * glow)
        minors.append(proj.minor_r * glow)
    return RadiusCorrectionTable(
        horizontal_cm=tuple(horizontal), measured_cm=tuple(measured),
        actual_cm=tuple(actual), area_px=tuple(areas),
        major_r_px=tuple(majors), minor_r_px=tuple(minors),
    )


def _project_unclipped(pose, cam, led_pos, led_diameter_cm):
    """Projection math without the in-frame visibility cut."""
    dx = led_pos[0] - pose.x
    dy = led_pos[1] - pose.y
    h = led_pos[2]
    dist = math.sqrt(dx * dx + dy * dy + h * h)
    radius_mm = cam.focal_mm * (led_diameter_cm * 10.0 / 2.0) / (dist * 10.0)
    major = radius_mm / cam.pitch_row_mm
    minor = major * (h / dist) * (cam.pitch_row_mm / cam.pitch_col_mm)
    from .shutter import EllipseProjection
    cr, cc = cam.center_px
    row = cr + (dy * cam.focal_mm / h) / cam.pitch_row_mm
    col = cc + (dx * cam.focal_mm / h) / cam.pitch_col_mm
    return EllipseProjection(center_px=(row, col), major_r=major,
                             minor_r=minor)
