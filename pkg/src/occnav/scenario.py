"""Scenario configuration: JSON schema, validation, defaults.

A scenario fully determines a simulation run: LED grid, camera,
transmitter chip clock, robot start pose, navigation target, noise
settings and the RNG seed.

Schema (all keys optional except ``target_id``)::

    {
      "grid": {"origin_xy": [0, 0], "spacing_cm": 50, "nx": 4, "ny": 8,
               "ceiling_height_cm": 256, "led_diameter_cm": 9.5,
               "led_area_cm2": 71},
      "camera": {"focal_mm": 4.2, "sensor_dh_mm": 4.0, "sensor_dv_mm": 3.0,
                 "img_rows": 800, "img_cols": 600, "fps": 20,
                 "exposure_s": 0.000125, "rotation_deg": 270},
      "chip_rate_hz": 4000,
      "glow": 2.5,
      "start_pose": {"x": 0, "y": 0},
      "target_id": 27,
      "arrival_tol_cm": 5.0,
      "noise": {"pixel_sigma": 0.0, "actuation_sigma_cm": 0.0},
      "seed": 0
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError, ScenarioError
from .model import CameraIntrinsics, LedGridConfig, RobotPose


@dataclass(frozen=True)
class NoiseConfig:
    pixel_sigma: float = 0.0
    actuation_sigma_cm: float = 0.0

    def __post_init__(self):
        if self.pixel_sigma < 0 or self.actuation_sigma_cm < 0:
            raise ScenarioError("noise sigmas must be nonnegative")


@dataclass(frozen=True)
class Scenario:
    grid: LedGridConfig = field(default_factory=LedGridConfig)
    cam: CameraIntrinsics = field(default_factory=CameraIntrinsics)
    start_pose: RobotPose = field(default_factory=RobotPose)
    target_id: int = 0
    chip_rate_hz: float = 4000.0
    glow: float = 2.5
    arrival_tol_cm: float = 5.0
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.target_id < self.grid.n_ids:
            raise ScenarioError(
                f"target_id {self.target_id} outside grid "
                f"({self.grid.n_ids} cells)"
            )
        if self.chip_rate_hz <= 0:
            raise ScenarioError("chip_rate_hz must be positive")
        if self.glow < 1.0:
            raise ScenarioError("glow must be >= 1")
        if self.arrival_tol_cm <= 0:
            raise ScenarioError("arrival_tol_cm must be positive")

    @property
    def step_cap(self) -> int:
        """Macro-step budget for navigation runs."""
        return self.grid.nx + self.grid.ny + 2


_GRID_KEYS = {"origin_xy", "spacing_cm", "nx", "ny", "ceiling_height_cm",
              "led_diameter_cm", "led_area_cm2"}
_CAM_KEYS = {"focal_mm", "sensor_dh_mm", "sensor_dv_mm", "img_rows",
             "img_cols", "fps", "exposure_s", "rotation_deg"}
_TOP_KEYS = {"grid", "camera", "start_pose", "target_id", "chip_rate_hz",
             "glow", "arrival_tol_cm", "noise", "seed"}


def _check_keys(mapping: dict, allowed: set, path: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ScenarioError(
            f"unknown key(s) {sorted(unknown)} at '{path}'"
        )


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "$")
    if "target_id" not in doc:
        raise ScenarioError("missing required key 'target_id' at '$'")

    def build(cls, section: str, allowed: set, transform=None):
        raw = doc.get(section, {})
        if not isinstance(raw, dict):
            raise ScenarioError(f"'{section}' must be an object")
        _check_keys(raw, allowed, f"$.{section}")
        if transform:
            raw = transform(raw)
        try:
            return cls(**raw)
        except (TypeError, DomainError, ScenarioError) as exc:
            raise ScenarioError(f"invalid '{section}' section: {exc}") from exc

    grid = build(LedGridConfig, "grid", _GRID_KEYS,
                 transform=_grid_transform)
    cam = build(CameraIntrinsics, "camera", _CAM_KEYS)
    noise = build(NoiseConfig, "noise",
                  {"pixel_sigma", "actuation_sigma_cm"})

    pose_raw = doc.get("start_pose", {})
    if not isinstance(pose_raw, dict):
        raise ScenarioError("'start_pose' must be an object")
    _check_keys(pose_raw, {"x", "y", "heading"}, "$.start_pose")
    pose = RobotPose(**pose_raw)

    try:
        return Scenario(
            grid=grid, cam=cam, start_pose=pose,
            target_id=int(doc["target_id"]),
            chip_rate_hz=float(doc.get("chip_rate_hz", 4000.0)),
            glow=float(doc.get("glow", 2.5)),
            arrival_tol_cm=float(doc.get("arrival_tol_cm", 5.0)),
            noise=noise, seed=int(doc.get("seed", 0)),
        )
    except (ValueError, DomainError, ScenarioError) as exc:
        raise ScenarioError(str(exc)) from exc


def _grid_transform(raw: dict) -> dict:
    raw = dict(raw)
    if "origin_xy" in raw:
        origin = raw["origin_xy"]
        if (not isinstance(origin, (list, tuple)) or len(origin) != 2):
            raise ScenarioError("'grid.origin_xy' must be a 2-element array")
        raw["origin_xy"] = (float(origin[0]), float(origin[1]))
    return raw


def load_scenario(path: str | Path) -> Scenario:
    """Read and validate a scenario JSON file."""
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"scenario file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON in {path}: {exc}") from exc
    return scenario_from_dict(doc)
