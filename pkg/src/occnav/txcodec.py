"""Transmitter-side bit pipeline.

A 5-bit location ID is line-coded two chips per bit (1 -> "01", 0 -> "00"),
prefixed with the start symbol "11", and the resulting 12-chip codeword is
transmitted as a cyclic on/off light waveform.  Because every payload
1-chip is followed by a 0-chip, "11" can only appear at the frame start,
which is what makes blind synchronization possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EncodingError, SyncError
from .model import ID_BITS, MAX_IDS

PAYLOAD_CHIPS = 2 * ID_BITS          # 10
FRAME_CHIPS = PAYLOAD_CHIPS + 2      # 12
START_SYMBOL = (1, 1)

BIT_TO_CHIPS = {1: (0, 1), 0: (0, 0)}


def encode_manchester(bits: int) -> tuple[int, ...]:
    """Encode a 5-bit value into its 10-chip payload (MSB first)."""
    if not 0 <= bits < MAX_IDS:
        raise DomainError(f"value {bits} outside 5-bit range")
    chips: list[int] = []
    for k in range(ID_BITS - 1, -1, -1):
        chips.extend(BIT_TO_CHIPS[(bits >> k) & 1])
    return tuple(chips)


def decode_manchester(payload) -> int:
    """Decode a 10-chip payload back to its 5-bit value.

    Raises EncodingError on a pair outside {00, 01}, which signals either
    sync loss or a chip error.
    """
    payload = tuple(payload)
    if len(payload) != PAYLOAD_CHIPS:
        raise EncodingError(
            f"payload must be {PAYLOAD_CHIPS} chips, got {len(payload)}"
        )
    value = 0
    for k in range(0, PAYLOAD_CHIPS, 2):
        pair = payload[k: k + 2]
        if pair == (0, 1):
            value = (value << 1) | 1
        elif pair == (0, 0):
            value = value << 1
        else:
            raise EncodingError(f"invalid chip pair {pair} at offset {k}")
    return value


def frame_codeword(payload) -> tuple[int, ...]:
    """Prepend the start symbol to a validated payload."""
    payload = tuple(payload)
    if len(payload) != PAYLOAD_CHIPS:
        raise EncodingError(
            f"payload must be {PAYLOAD_CHIPS} chips, got {len(payload)}"
        )
    for k in range(0, PAYLOAD_CHIPS, 2):
        if payload[k: k + 2] not in ((0, 0), (0, 1)):
            raise EncodingError(f"invalid chip pair at offset {k}")
    return START_SYMBOL + payload


def codeword_for(bits: int) -> tuple[int, ...]:
    """Convenience: full 12-chip framed codeword for an ID."""
    return frame_codeword(encode_manchester(bits))


def locate_start(stream, frame_len: int = FRAME_CHIPS, circular: bool = False) -> int:
    """Offset of the start symbol such that a valid payload follows.

    With ``circular=True`` the stream is treated as one period of the
    cyclically repeating transmission, so a window of just ``frame_len``
    chips is enough to recover the codeword.
    """
    stream = tuple(stream)
    if circular:
        if len(stream) < frame_len:
            raise SyncError(
                f"need at least {frame_len} chips, got {len(stream)}"
            )
        candidates = range(frame_len)
        doubled = stream[:frame_len] * 2
    else:
        if len(stream) < 2 * frame_len:
            raise SyncError(
                f"need at least {2 * frame_len} chips, got {len(stream)}"
            )
        candidates = range(len(stream) - frame_len + 1)
        doubled = stream
    for off in candidates:
        window = doubled[off: off + frame_len]
        if window[:2] != START_SYMBOL:
            continue
        try:
            decode_manchester(window[2:])
        except EncodingError:
            continue
        return off
    raise SyncError("no valid start symbol found")


def decode_stream(stream, circular: bool = False) -> int:
    """Synchronize on a chip stream and decode its 5-bit ID."""
    stream = tuple(stream)
    off = locate_start(stream, circular=circular)
    doubled = stream * 2 if circular else stream
    return decode_manchester(doubled[off + 2: off + FRAME_CHIPS])


def codeword_duty(chips) -> float:
    """Fraction of time the LED is on over one codeword period."""
    chips = tuple(chips)
    return sum(chips) / len(chips)


@dataclass(frozen=True)
class Waveform:
    """Piecewise-constant on/off light intensity, repeating cyclically.

    Chip k occupies [k/chip_rate, (k+1)/chip_rate) within each period.
    """

    chips: tuple[int, ...]
    chip_rate_hz: float

    def __post_init__(self):
        if self.chip_rate_hz <= 0:
            raise DomainError("chip rate must be positive")
        if not self.chips:
            raise DomainError("waveform needs at least one chip")

    @property
    def chip_duration_s(self) -> float:
        return 1.0 / self.chip_rate_hz

    @property
    def period_s(self) -> float:
        return len(self.chips) / self.chip_rate_hz

    def _cum_on(self, t):
        """Total on-time of the cyclic waveform over [0, t), vectorized."""
        t = np.asarray(t, dtype=float)
        chips = np.asarray(self.chips, dtype=float)
        n = len(chips)
        cum = np.concatenate(([0.0], np.cumsum(chips)))  # in chip units
        pos = t * self.chip_rate_hz
        periods, rem = np.divmod(pos, n)
        idx = rem.astype(int)
        frac = rem - idx
        on_chips = periods * cum[-1] + cum[idx] + chips[idx] * frac
        return on_chips * self.chip_duration_s

    def on_time(self, t0, t1):
        """On-time within [t0, t1); accepts scalars or arrays."""
        return self._cum_on(t1) - self._cum_on(t0)

    def mean_level(self, t0, t1):
        """Average intensity over [t0, t1)."""
        t0 = np.asarray(t0, dtype=float)
        t1 = np.asarray(t1, dtype=float)
        return self.on_time(t0, t1) / (t1 - t0)

    def value_at(self, t: float) -> int:
        """Instantaneous on/off level."""
        k = int(t * self.chip_rate_hz) % len(self.chips)
        return self.chips[k]


def chips_to_waveform(chips, chip_rate_hz: float) -> Waveform:
    return Waveform(chips=tuple(chips), chip_rate_hz=chip_rate_hz)


def waveform_for_id(bits: int, chip_rate_hz: float) -> Waveform:
    """Framed codeword waveform for a location ID."""
    return chips_to_waveform(codeword_for(bits), chip_rate_hz)


def tone_waveform(chip_rate_hz: float) -> Waveform:
    """Alternating on/off square wave at the chip rate (pure tone)."""
    return chips_to_waveform((1, 0), chip_rate_hz)


def max_dark_run_chips(frame_len: int = FRAME_CHIPS) -> int:
    """Longest possible off-chip run in any cyclic framed codeword.

    The all-zero payload leaves only the start symbol lit: 10 dark chips.
    """
    return frame_len - 2
