import numpy as np
import pytest

from occnav.errors import ScanError
from occnav.model import CameraIntrinsics, RobotPose
from occnav.pgmio import (
    load_frame,
    read_pgm,
    read_sidecar,
    write_pgm,
    write_sidecar,
)
from occnav.shutter import project_led, render_frame
from occnav.txcodec import waveform_for_id

CAM = CameraIntrinsics()


def make_frame():
    proj = project_led(RobotPose(0, 0), CAM, (0.0, 0.0, 256.0), 9.5)
    return proj, render_frame([(proj, waveform_for_id(27, 4000.0))], CAM)


def test_pgm_round_trip(tmp_path):
    _, frame = make_frame()
    path = tmp_path / "f.pgm"
    write_pgm(path, frame)
    data = read_pgm(path)
    assert data.shape == frame.data.shape
    # 8-bit quantization bound
    assert np.max(np.abs(data - frame.data)) <= 0.5 / 255.0 + 1e-12


def test_pgm_header(tmp_path):
    _, frame = make_frame()
    path = tmp_path / "f.pgm"
    write_pgm(path, frame)
    header = path.read_bytes()[:15]
    assert header.startswith(b"P5\n600 800\n255")


def test_read_rejects_ascii_pgm(tmp_path):
    path = tmp_path / "bad.pgm"
    path.write_bytes(b"P2\n2 2\n255\n0 0 0 0\n")
    with pytest.raises(ScanError):
        read_pgm(path)


def test_sidecar_round_trip(tmp_path):
    proj, frame = make_frame()
    pgm = tmp_path / "f.pgm"
    side = tmp_path / "f.json"
    write_pgm(pgm, frame)
    write_sidecar(side, frame, truth=[(27, proj)])
    meta = read_sidecar(side)
    assert meta["leds"][0]["bits"] == 27
    assert meta["leds"][0]["area_px"] == pytest.approx(proj.area_px)
    loaded = load_frame(pgm, side)
    assert loaded.row_time_s == frame.row_time_s
    assert loaded.exposure_s == frame.exposure_s
    assert loaded.data.shape == frame.data.shape


def test_load_frame_shape_mismatch(tmp_path):
    _, frame = make_frame()
    pgm = tmp_path / "f.pgm"
    side = tmp_path / "f.json"
    write_pgm(pgm, frame)
    small = render_frame([], CameraIntrinsics(img_rows=400, img_cols=300))
    write_sidecar(side, small)
    with pytest.raises(ScanError):
        load_frame(pgm, side)


def test_saved_frame_still_decodes(tmp_path):
    from occnav.decoder import decode_frame
    _, frame = make_frame()
    pgm = tmp_path / "f.pgm"
    side = tmp_path / "f.json"
    write_pgm(pgm, frame)
    write_sidecar(side, frame)
    loaded = load_frame(pgm, side)
    decoded = decode_frame(loaded, CAM)
    assert [d.bits for d in decoded] == [27]
