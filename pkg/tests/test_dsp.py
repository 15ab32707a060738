import numpy as np
import pytest
from hypothesis import given, strategies as st

from gearacoustics.dsp import (analytic_envelope, design_fir_window, filter_zero_phase, fir_tap_count,
                               magnitude_spectrum)
from gearacoustics.errors import InvalidCutoffs, SignalTooShort
from gearacoustics.signal import TimeSignal

from conftest import am_tone, tone


def _rule(lower, rate):
    # independent restatement: largest odd integer <= round(7.5 * rate / L)
    n = round(7.5 * rate / lower)
    return n if n % 2 else n - 1


@pytest.mark.parametrize("lower,rate,expected", [(1150, 48000, 313), (10, 500, 375)])
def test_tap_counts(lower, rate, expected):
    assert fir_tap_count(lower, rate) == expected
    kind = "band_pass" if lower == 1150 else "high_pass"
    assert len(design_fir_window(lower, 5100 if lower == 1150 else None, rate, kind)) == expected


@given(st.floats(0.002, 0.45), st.sampled_from([8000.0, 16000.0, 44100.0, 48000.0]))
def test_tap_rule_and_symmetry(fraction, rate):
    lower = fraction * rate
    k = design_fir_window(lower, None, rate, "high_pass")
    assert len(k) == _rule(lower, rate) and len(k) % 2 == 1
    np.testing.assert_array_equal(k.taps, k.taps[::-1])


def test_passband_unity_at_band_centre():
    k = design_fir_window(1150, 5100, 48000)
    assert abs(abs(k.frequency_response(3125.0)[0]) - 1) < 0.01


@pytest.mark.parametrize("args", [(0, 100, 1000, "band_pass"), (300, 200, 1000, "band_pass"),
                                  (100, 600, 1000, "band_pass"), (600, None, 1000, "high_pass"),
                                  (100, 200, 1000, "low_pass")])
def test_invalid_cutoffs(args):
    with pytest.raises(InvalidCutoffs):
        design_fir_window(*args)


def _edge_trimmed(x, n):
    return x[n:-n]


def test_zero_phase_passband():
    k = design_fir_window(1150, 5100, 48000)
    x = tone(2000, 0.5)
    y = filter_zero_phase(x, k)
    n = len(k)
    a, b = _edge_trimmed(x.samples, n), _edge_trimmed(y.samples, n)
    t = np.arange(a.size)
    basis = np.stack([np.cos(2 * np.pi * 2000 * t / 48000), np.sin(2 * np.pi * 2000 * t / 48000)], 1)
    ca, cb = np.linalg.lstsq(basis, a, rcond=None)[0], np.linalg.lstsq(basis, b, rcond=None)[0]
    phase = np.angle(complex(*cb) / complex(*ca))
    assert abs(phase) < 1e-3
    assert abs(np.hypot(*cb) / np.hypot(*ca) - 1) < 0.01


def test_stopband_100hz_at_least_40db():
    k = design_fir_window(1150, 5100, 48000)
    # kernel response squared by the two passes
    predicted = 20 * np.log10(abs(k.frequency_response(100.0)[0]) ** 2)
    y = filter_zero_phase(tone(100, 1.0), k)
    n = len(k)
    measured = 20 * np.log10(np.sqrt(2) * np.std(y.samples[n:-n]))
    assert predicted <= -40 and measured <= -40


def test_impulse_response_is_kernel_autocorrelation():
    k = design_fir_window(1150, 5100, 48000)
    n = len(k)
    x = np.zeros(8 * n)
    x[4 * n] = 1.0
    y = filter_zero_phase(TimeSignal(x, 48000), k).samples
    auto = np.correlate(k.taps, k.taps, mode="full")
    np.testing.assert_allclose(y[4 * n - (n - 1): 4 * n + n], auto, atol=1e-15)


def test_short_signal_rejected():
    k = design_fir_window(1150, 5100, 48000)
    with pytest.raises(SignalTooShort):
        filter_zero_phase(TimeSignal(np.zeros(3 * len(k)), 48000), k)


def test_double_filtering_gives_fourth_power():
    k = design_fir_window(1150, 5100, 48000)
    n = len(k)
    for f in (1300.0, 5000.0):
        y = filter_zero_phase(filter_zero_phase(tone(f, 1.0), k), k).samples[2 * n:-2 * n]
        gain = np.sqrt(2) * np.std(y)
        assert gain == pytest.approx(abs(k.frequency_response(f)[0]) ** 4, rel=2e-3)


def test_envelope_of_pure_tone():
    x = tone(1000, 1.0)
    env = analytic_envelope(x)
    edge = int(0.05 * env.size)
    assert np.max(np.abs(env[edge:-edge] - 1)) < 1e-3


def test_envelope_am_demodulation():
    x = am_tone(30, 2000, 0.5)
    env = analytic_envelope(x.samples)
    expected = 1 + 0.5 * np.cos(2 * np.pi * 30 * x.times)
    edge = int(0.05 * env.size)
    err = env[edge:-edge] - expected[edge:-edge]
    assert np.sqrt(np.mean(err ** 2)) < 0.01


def test_envelope_of_zeros():
    assert not analytic_envelope(np.zeros(64)).any()


@given(st.floats(0.01, 100.0))
def test_envelope_gain_equivariance(c):
    x = np.random.default_rng(0).standard_normal(256)
    np.testing.assert_allclose(analytic_envelope(c * x), c * analytic_envelope(x), rtol=1e-9, atol=1e-12)


def test_spectrum_normalization():
    fs = 1000.0
    t = np.arange(1000) / fs
    s = magnitude_spectrum(np.sin(2 * np.pi * 100 * t) + 0.25 * np.cos(2 * np.pi * 230 * t), fs)
    assert s.magnitudes[100] == pytest.approx(1.0, abs=1e-9)
    assert s.magnitudes[230] == pytest.approx(0.25, abs=1e-9)
    c = magnitude_spectrum(np.full(1000, 3.0), fs)
    assert c.magnitudes[0] == pytest.approx(3.0)
    assert np.all(c.magnitudes[1:] < 1e-9)


@given(st.integers(2, 300), st.floats(1.0, 1e5))
def test_spectrum_bin_grid(n, rate):
    s = magnitude_spectrum(np.random.default_rng(n).standard_normal(n), rate)
    assert s.frequencies_hz[0] == 0
    np.testing.assert_allclose(np.diff(s.frequencies_hz), s.resolution_hz)
    assert s.resolution_hz == pytest.approx(rate / n)
    assert np.all(s.magnitudes >= 0)


@given(st.integers(2, 257))
def test_parseval(n):
    x = np.random.default_rng(n).standard_normal(n)
    mags = magnitude_spectrum(x, 1.0).magnitudes
    # undo the one-sided doubling to recover the two-sided energy
    two_sided = mags ** 2
    last = mags.size - 1
    inner = slice(1, last) if n % 2 == 0 else slice(1, None)
    energy = two_sided[0] + np.sum(two_sided[inner]) / 2
    if n % 2 == 0:
        energy += two_sided[last]
    assert energy * n == pytest.approx(np.sum(x ** 2), rel=1e-9)
