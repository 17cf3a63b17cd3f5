import math

import numpy as np
import pytest

from occnav.channel import ber_sweep, mfsk_bit_error, mfsk_error, snr_db_to_linear
from occnav.errors import DomainError


@pytest.mark.parametrize("m", [2, 4, 8])
def test_zero_snr_identity(m):
    assert mfsk_error(m, 0.0) == pytest.approx((m - 1) / m, abs=1e-15)


def test_binary_closed_form():
    for rho in [0.0, 0.5, 1.0, 3.7, 10.0, 30.0]:
        assert abs(mfsk_error(2, rho) - 0.5 * math.exp(-rho / 2.0)) < 1e-12


def test_rejects_bad_order():
    with pytest.raises(DomainError):
        mfsk_error(3, 1.0)
    with pytest.raises(DomainError):
        mfsk_error(1, 1.0)


def test_rejects_negative_snr():
    with pytest.raises(DomainError):
        mfsk_error(2, -0.1)


def test_order_improves_error():
    # per bit, at equal energy per bit, higher orders strictly win;
    # ties are only tolerated where the value underflows to exactly 0.0
    for snr_db in range(-5, 31):
        rho = snr_db_to_linear(snr_db)
        p2 = mfsk_bit_error(2, rho)
        p4 = mfsk_bit_error(4, rho)
        p8 = mfsk_bit_error(8, rho)
        assert p8 < p4 < p2 or (p8 == 0.0 and p8 <= p4 < p2)


def test_order_hurts_symbol_error_at_low_snr():
    # per symbol the ranking flips near zero SNR: the (M-1)/M floor grows
    rho = snr_db_to_linear(-5.0)
    assert mfsk_error(8, rho) > mfsk_error(4, rho) > mfsk_error(2, rho)


def test_bit_error_binary_matches_symbol_error():
    for rho in [0.0, 0.3, 1.0, 5.0]:
        assert mfsk_bit_error(2, rho) == pytest.approx(mfsk_error(2, rho))


def test_sweep_shape():
    rows = ber_sweep(orders=(2, 4), snr_db_start=0.0, snr_db_stop=2.0,
                     step_db=1.0)
    assert len(rows) == 6
    expect = 0.5 * math.exp(-0.5)
    assert rows[0] == {"snr_db": 0.0, "m": 2, "p_err": pytest.approx(expect)}


def test_monte_carlo_oracle_binary():
    # binary orthogonal signaling, noncoherent envelope detector:
    # error when the noise-only branch outruns the signal branch
    rng = np.random.default_rng(1234)
    rho = snr_db_to_linear(6.0)
    n = 200_000
    sig = np.abs(math.sqrt(rho) + (rng.normal(size=n) + 1j * rng.normal(size=n))
                 / math.sqrt(2.0))
    noi = np.abs((rng.normal(size=n) + 1j * rng.normal(size=n)) / math.sqrt(2.0))
    p_hat = np.mean(noi > sig)
    p = mfsk_error(2, rho)
    sigma = math.sqrt(p * (1 - p) / n)
    assert abs(p_hat - p) < 3 * sigma
