import wave

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gearacoustics.errors import IoFailure, UnsupportedChannels
from gearacoustics.signal import TimeSignal, load_wav, save_wav
from scipy.io import wavfile


def test_pcm16_header_arithmetic(tmp_path):
    path = tmp_path / "a.wav"
    wavfile.write(path, 48000, np.zeros(240000, dtype=np.int16))
    sig = load_wav(path)
    assert len(sig) == 240000
    assert sig.sample_rate_hz == 48000
    assert sig.duration_s == pytest.approx(5.0)


def test_stereo_rejected(tmp_path):
    path = tmp_path / "st.wav"
    wavfile.write(path, 8000, np.zeros((100, 2), dtype=np.int16))
    with pytest.raises(UnsupportedChannels):
        load_wav(path)


def test_float_fullscale_sine_stays_within_calibration(tmp_path):
    path = tmp_path / "f.wav"
    t = np.arange(4800) / 48000
    wavfile.write(path, 48000, np.sin(2 * np.pi * 440 * t).astype(np.float32))
    sig = load_wav(path, calibration_pa_per_fullscale=2.5)
    assert np.abs(sig.samples).max() <= 2.5


@pytest.mark.parametrize("encoding,tol", [("float32", 1e-6), ("pcm16", 2 ** -15), ("pcm24", 2 ** -23)])
def test_round_trip_within_quantization(tmp_path, encoding, tol):
    t = np.arange(4800) / 48000
    x = 0.999 * np.sin(2 * np.pi * 1000 * t)
    path = tmp_path / f"{encoding}.wav"
    save_wav(TimeSignal(x, 48000), path, encoding)
    back = load_wav(path)
    assert np.max(np.abs(back.samples - x)) < tol


def test_pcm24_header(tmp_path):
    path = tmp_path / "p24.wav"
    save_wav(TimeSignal(np.zeros(10), 16000), path, "pcm24")
    with wave.open(str(path)) as fh:
        assert fh.getsampwidth() == 3 and fh.getnchannels() == 1 and fh.getnframes() == 10


def test_empty_path_is_io_failure():
    with pytest.raises(IoFailure):
        save_wav(TimeSignal(np.zeros(4), 8000), "")


def test_missing_file_is_io_failure(tmp_path):
    with pytest.raises(IoFailure):
        load_wav(tmp_path / "nope.wav")


@pytest.mark.parametrize("bad", [dict(samples=[], sample_rate_hz=1.0), dict(samples=[np.nan], sample_rate_hz=1.0),
                                 dict(samples=[0.0], sample_rate_hz=0.0)])
def test_time_signal_invariants(bad):
    with pytest.raises(ValueError):
        TimeSignal(**bad)


@given(st.floats(0.1, 10.0))
def test_calibration_linearity(tmp_path_factory, cal):
    path = tmp_path_factory.mktemp("cal") / "x.wav"
    x = np.linspace(-0.5, 0.5, 64)
    save_wav(TimeSignal(x, 8000), path)
    one = load_wav(path, cal).samples
    two = load_wav(path, 2 * cal).samples
    np.testing.assert_allclose(two, 2 * one, rtol=1e-15)
