"""Simulator and receiver library for LED-to-rolling-shutter-camera
optical links: 5-bit location beacons, stripe decoding, photogrammetric
ranging and grid navigation."""

from .model import (
    CameraIntrinsics,
    LedGridConfig,
    LocationId,
    RobotPose,
    bits_of_cell,
    cell_of_bits,
    led_floor_position,
    led_world_position,
    location_id,
)
from .txcodec import (
    codeword_for,
    decode_manchester,
    decode_stream,
    encode_manchester,
    frame_codeword,
    locate_start,
    waveform_for_id,
)
from .shutter import (
    EllipseProjection,
    FrameScan,
    apply_rotation,
    composite_max,
    project_led,
    render_frame,
    stratified_burst,
    visible_leds,
)
from .decoder import (
    BlobDetection,
    Region,
    decode_blob,
    decode_frame,
    detect_rois,
    measure_stripes,
    run_lengths,
    throughput_bps,
    widths_to_chips,
)
from .ranging import (
    Calibration,
    RadiusCorrectionTable,
    accuracy_report,
    brute_force_led_count,
    direct_distance,
    ellipse_corrected_distance,
    expected_led_count,
    fov_angles,
    fov_area,
    horizontal_distance,
    load_reference_table,
    table_from_camera,
)
from .navigate import (
    NavReport,
    Sighting,
    infer_orientation,
    next_action,
    observe,
    replay_poses,
    run_navigation,
)
from .channel import ber_sweep, mfsk_bit_error, mfsk_error, snr_db_to_linear
from .scenario import NoiseConfig, Scenario, load_scenario, scenario_from_dict
from .sweeps import ranging_error_sweep, reproduce_sweeps, reproduce_table1
from .errors import (
    DomainError,
    EncodingError,
    InsufficientDataError,
    NonConvergenceError,
    OccNavError,
    ScanError,
    ScenarioError,
    SyncError,
)

__version__ = "0.1.0"
