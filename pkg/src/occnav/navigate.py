"""Grid navigation state machine.

Each macro-step the robot captures a short burst of frames, decodes the
visible LED IDs, and either moves to the floor point of the target LED
(when its ID was received) or to the floor point of the decoded LED
closest to the target in grid distance.  With only one or two LEDs
readable the robot first parks under one of them and retries from there.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decoder import Region, assign_region, decode_extent, detect_rois
from .errors import DomainError, InsufficientDataError, NonConvergenceError, \
    ScanError, SyncError
from .model import RobotPose, cell_of_bits, led_floor_position, location_id
from .ranging import ellipse_corrected_distance, horizontal_distance, \
    table_from_camera
from .scenario import Scenario
from .shutter import composite_max, stratified_burst, visible_leds
from .txcodec import waveform_for_id


@dataclass(frozen=True)
class AxisOrientation:
    """Direction in which grid coordinates grow, in the camera frame."""

    x_increases_right: bool
    y_increases_front: bool


@dataclass(frozen=True)
class Sighting:
    """One decoded LED with everything navigation needs."""

    bits: int
    cell: tuple[int, int]
    region: Region
    area_px: int
    move_vec: tuple[float, float]   # robot -> floor point, cm (from image)
    s_image_cm: float               # |move_vec|
    d_corrected_cm: float           # table-corrected direct distance
    s_pyth_cm: float                # sqrt(D^2 - h^2) from the above


@dataclass(frozen=True)
class Action:
    kind: str                       # "move" or "done"
    target_bits: int
    move_vec: tuple[float, float] = (0.0, 0.0)
    s_image_cm: float = 0.0
    s_pyth_cm: float = 0.0


@dataclass
class NavState:
    pose: RobotPose
    target_bits: int
    target_cell: tuple[int, int]
    orientation: AxisOrientation | None = None
    visited_log: list[dict] = field(default_factory=list)


@dataclass
class NavReport:
    arrived: bool
    final_pose: RobotPose
    final_error_cm: float
    steps: int
    log: list[dict]
    orientation: AxisOrientation | None


def infer_orientation(sightings: list[Sighting]) -> AxisOrientation:
    """Axis directions from a diagonal region pair.

    x grows rightward when the left-front LED's grid x is below the
    right-back one's (or front-right above back-left); y grows frontward
    when the left-front grid y exceeds the right-back one's.
    """
    by_region: dict[Region, Sighting] = {}
    for s in sightings:
        by_region.setdefault(s.region, s)
    lf = by_region.get(Region.LEFT_FRONT)
    rb = by_region.get(Region.RIGHT_BACK)
    fr = by_region.get(Region.FRONT_RIGHT)
    bl = by_region.get(Region.BACK_LEFT)

    def resolve(axis: int, flip_second: bool) -> bool:
        if lf is not None and rb is not None and lf.cell[axis] != rb.cell[axis]:
            return (lf.cell[axis] < rb.cell[axis]) ^ flip_second
        if fr is not None and bl is not None and fr.cell[axis] != bl.cell[axis]:
            return fr.cell[axis] > bl.cell[axis]
        raise DomainError(
            "no diagonal LED pair with distinct coordinates on this axis"
        )

    # x: LF < RB means rightward; y: LF > RB means frontward.
    x_right = resolve(0, flip_second=False)
    y_front = resolve(1, flip_second=True)
    return AxisOrientation(x_increases_right=x_right, y_increases_front=y_front)


def observe(scenario: Scenario, pose: RobotPose, t0: float,
            table, rng=None) -> list[Sighting]:
    """Capture a frame burst at the current pose and decode it.

    Geometry comes from the per-pixel max composite (every part of each
    blob is lit in some frame of the burst); the chip stream is read from
    individual striped frames, falling back across the burst when a blob
    fails to decode in the first one.
    """
    cam, grid = scenario.cam, scenario.grid
    scene = [
        (proj, waveform_for_id(bits, scenario.chip_rate_hz))
        for bits, proj in visible_leds(grid, cam, pose)
    ]
    frames = stratified_burst(scene, cam, t0, glow=scenario.glow,
                              noise_sigma=scenario.noise.pixel_sigma, rng=rng)
    composite = composite_max(frames)

    chip_rows = (1.0 / scenario.chip_rate_hz) / cam.row_time_s
    smear_rows = max(0.0, round(cam.exposure_s / cam.row_time_s) - 1.0)
    geo_blobs = detect_rois(composite, chip_rows=chip_rows)

    h = grid.ceiling_height_cm
    cr, cc = cam.center_px
    sightings: list[Sighting] = []
    for geo in geo_blobs:
        bits = None
        for frame in frames:
            try:
                bits = decode_extent(frame, geo, chip_rows, smear_rows)
                break
            except (InsufficientDataError, SyncError):
                continue
        if bits is None or bits >= grid.n_ids:
            continue
        # image offset -> horizontal displacement (exact pinhole inverse)
        dy = (geo.center_px[0] - cr) * cam.pitch_row_mm * h / cam.focal_mm
        dx = (geo.center_px[1] - cc) * cam.pitch_col_mm * h / cam.focal_mm
        s_image = math.hypot(dx, dy)
        d_corr = ellipse_corrected_distance(geo, table)
        s_pyth = horizontal_distance(max(d_corr, h), h)
        sightings.append(Sighting(
            bits=bits, cell=cell_of_bits(bits, grid),
            region=assign_region(geo.center_px, cam),
            area_px=geo.area_px, move_vec=(dx, dy), s_image_cm=s_image,
            d_corrected_cm=d_corr, s_pyth_cm=s_pyth,
        ))
    return sightings


def next_action(state: NavState, sightings: list[Sighting],
                arrival_tol_cm: float = 5.0) -> Action:
    """One step of the navigation flowchart.

    Moves execute the image-derived horizontal vector: near the zenith
    the Pythagorean distance amplifies any ranging error (ds/dD = D/s),
    so the reported s_pyth is informational while the blob's image offset
    steers the robot.
    """
    if not sightings:
        raise ScanError("no LEDs decoded; re-capture required")

    target = next((s for s in sightings if s.bits == state.target_bits), None)
    if target is not None:
        if target.s_image_cm <= arrival_tol_cm:
            return Action(kind="done", target_bits=target.bits)
        return Action(kind="move", target_bits=target.bits,
                      move_vec=target.move_vec,
                      s_image_cm=target.s_image_cm,
                      s_pyth_cm=target.s_pyth_cm)

    if len(sightings) >= 3:
        try:
            state.orientation = infer_orientation(sightings)
        except DomainError:
            # near the field edge every LED can crowd into two image
            # quadrants; the moves are image-derived, so stepping toward
            # the grid-nearest LED stays valid without orientation
            pass
        tc = state.target_cell
        chosen = min(sightings, key=lambda s: (
            _chebyshev(s.cell, tc), s.s_image_cm, s.bits))
        return _move_to(chosen)

    # one or two readable LEDs: park under one (larger blob first),
    # never re-choosing the LED already underfoot
    afield = [s for s in sightings if s.s_image_cm > arrival_tol_cm]
    chosen = min(afield or sightings, key=lambda s: (-s.area_px, s.bits))
    return _move_to(chosen)


def _chebyshev(a: tuple[int, int], b: tuple[int, int]) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _move_to(s: Sighting) -> Action:
    return Action(kind="move", target_bits=s.bits, move_vec=s.move_vec,
                  s_image_cm=s.s_image_cm, s_pyth_cm=s.s_pyth_cm)


def run_navigation(scenario: Scenario, max_rescans: int = 3) -> NavReport:
    """Drive the robot until it stands under the target LED.

    Raises NonConvergenceError (with the log attached) when the step
    budget is exhausted.
    """
    grid, cam = scenario.grid, scenario.cam
    if not 0 <= scenario.target_id < grid.n_ids:
        raise DomainError("target outside grid")

    rng = np.random.default_rng(scenario.seed)
    table = table_from_camera(
        cam, grid.ceiling_height_cm, grid.led_diameter_cm,
        glow=scenario.glow,
        max_horizontal_cm=max(grid.nx, grid.ny) * grid.spacing_cm + 100.0,
    )
    state = NavState(pose=scenario.start_pose,
                     target_bits=scenario.target_id,
                     target_cell=cell_of_bits(scenario.target_id, grid))
    target_floor = led_floor_position(grid, location_id(scenario.target_id,
                                                        grid))
    t0 = 0.0
    burst_span = 6.0 / cam.fps
    steps = 0
    arrived = False

    while True:
        sightings = None
        for attempt in range(max_rescans + 1):
            got = observe(scenario, state.pose, t0, table, rng)
            t0 += burst_span
            if got:
                sightings = got
                break
        if sightings is None:
            raise NonConvergenceError("no LEDs decodable at current pose",
                                      log=state.visited_log)

        action = next_action(state, sightings, scenario.arrival_tol_cm)
        entry = {
            "step": steps,
            "t": t0,
            "pose": [state.pose.x, state.pose.y],
            "decoded": sorted(s.bits for s in sightings),
            "action": action.kind,
            "toward": action.target_bits,
            "move": list(action.move_vec),
            "s_image_cm": action.s_image_cm,
            "s_pyth_cm": action.s_pyth_cm,
        }
        state.visited_log.append(entry)
        if action.kind == "done":
            arrived = True
            break
        if steps >= scenario.step_cap:
            raise NonConvergenceError(
                f"step budget {scenario.step_cap} exhausted",
                log=state.visited_log)

        dx, dy = action.move_vec
        if scenario.noise.actuation_sigma_cm > 0:
            dx += rng.normal(0.0, scenario.noise.actuation_sigma_cm)
            dy += rng.normal(0.0, scenario.noise.actuation_sigma_cm)
        state.pose = RobotPose(state.pose.x + dx, state.pose.y + dy)
        steps += 1

    err = math.hypot(state.pose.x - target_floor[0],
                     state.pose.y - target_floor[1])
    return NavReport(arrived=arrived, final_pose=state.pose,
                     final_error_cm=err, steps=steps,
                     log=state.visited_log, orientation=state.orientation)


def write_log_jsonl(log: list[dict], path: str | Path) -> None:
    """Append-only visited-LED log, one JSON record per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for entry in log:
            fh.write(json.dumps(entry) + "\n")


def read_log_jsonl(path: str | Path) -> list[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def replay_poses(log: list[dict], start: RobotPose) -> list[tuple[float, float]]:
    """Re-apply logged moves; returns the pose after every step.

    Matches the logged poses exactly for a noiseless run, which makes the
    log a replayable record of the trajectory.
    """
    poses = [(start.x, start.y)]
    x, y = start.x, start.y
    for entry in log:
        if entry["action"] != "move":
            continue
        x += entry["move"][0]
        y += entry["move"][1]
        poses.append((x, y))
    return poses
