import numpy as np
import pytest
from hypothesis import given, strategies as st

from gearacoustics.errors import DegenerateVariance, SeriesTooShort, SignalTooShort, TooFewValues, ZeroMean
from gearacoustics.psycho import (SPA_NAMES, TVPA_NAMES, LoudnessSeries, highpass_loudness, impulse_factor,
                                  kurtosis, spa_features, stationary_loudness, timevarying_fluctuation,
                                  timevarying_loudness, timevarying_roughness, tvpa_features, variance)
from gearacoustics.psycho.loudness import (BAND_UPPER_BARK, SLOPE_RANGES, SLOPE_STEEPNESS, core_loudness,
                                           specific_loudness)
from gearacoustics.signal import TimeSignal
from gearacoustics.synth import pure_tone


def zwicker_scalar(nm):
    """Loop-based slope integration of core loudness, one band at a time.

    Written in the style of the classic reference program so that the
    vectorised Bark-grid integration has an independent counterpart.
    """
    total, z1, n1, j = 0.0, 0.0, 0.0, 17
    for i in range(21):
        zup = BAND_UPPER_BARK[i] + 1e-4
        ig = min(max(i - 1, 0), 7)
        while z1 < zup:
            if n1 <= nm[i]:
                if n1 < nm[i]:
                    j = 0
                    while SLOPE_RANGES[j] >= nm[i] and j < 17:
                        j += 1
                z2, n2 = zup, nm[i]
                total += n2 * (z2 - z1)
            else:
                n2 = max(SLOPE_RANGES[j], nm[i])
                dz = (n1 - n2) / SLOPE_STEEPNESS[j, ig]
                z2 = z1 + dz
                if z2 > zup:
                    z2 = zup
                    dz = z2 - z1
                    n2 = n1 - dz * SLOPE_STEEPNESS[j, ig]
                total += dz * (n1 + n2) / 2
            while n2 <= SLOPE_RANGES[j] and j < 17:
                j += 1
            z1, n1 = z2, n2
    return total


# ---------------------------------------------------------------- loudness

@given(st.lists(st.floats(-10, 100), min_size=28, max_size=28))
def test_bark_integration_matches_scalar_oracle(levels):
    levels = np.array(levels)
    _, total = specific_loudness(levels)
    assert float(total) == pytest.approx(zwicker_scalar(core_loudness(levels)), rel=1e-3, abs=1e-6)


def test_sone_anchors():
    forty, _ = stationary_loudness(pure_tone(1000, 40, 1.0))
    fifty, _ = stationary_loudness(pure_tone(1000, 50, 1.0))
    assert forty == pytest.approx(1.0, rel=0.1)
    assert fifty / forty == pytest.approx(2.0, rel=0.1)


def test_silence_is_quiet():
    silence = TimeSignal(np.zeros(48000), 48000)
    assert stationary_loudness(silence)[0] < 0.01
    assert np.all(timevarying_loudness(silence).values < 0.01)


def test_specific_loudness_grid():
    _, pattern = stationary_loudness(pure_tone(1000, 60, 1.0))
    assert pattern.shape == (240,)
    assert np.argmax(pattern) * 0.1 == pytest.approx(8.5, abs=0.6)


@given(st.floats(-20, 20), st.floats(0, 20))
def test_loudness_monotone_in_gain(db, extra_db):
    x = np.random.default_rng(5).standard_normal(24000) * 0.02
    a = stationary_loudness(TimeSignal(x * 10 ** (db / 20), 48000))[0]
    b = stationary_loudness(TimeSignal(x * 10 ** ((db + extra_db) / 20), 48000))[0]
    assert b >= a - 1e-12


def test_timevarying_converges_to_stationary():
    x = pure_tone(1000, 40, 2.0)
    series = timevarying_loudness(x)
    stationary, _ = stationary_loudness(x)
    late = series.values[int(0.5 / series.frame_period_s):]
    assert np.all(np.abs(late / stationary - 1) < 0.15)


def test_short_inputs_rejected():
    with pytest.raises(SignalTooShort):
        stationary_loudness(pure_tone(1000, 60, 0.4))
    with pytest.raises(SignalTooShort):
        timevarying_loudness(pure_tone(1000, 60, 0.05))
    with pytest.raises(SignalTooShort):
        timevarying_roughness(pure_tone(1000, 60, 0.3))
    with pytest.raises(SignalTooShort):
        timevarying_fluctuation(pure_tone(1000, 60, 0.9))


@pytest.mark.parametrize("seconds,rate", [(5.0, 48000.0), (1.0, 44100.0), (2.3, 16000.0)])
def test_frame_counts(seconds, rate):
    x = TimeSignal(np.random.default_rng(0).standard_normal(int(round(seconds * rate))) * 0.01, rate)
    assert len(timevarying_loudness(x)) == int(np.floor(seconds / 0.002 + 1e-9))
    assert len(timevarying_roughness(x)) == int(np.floor(seconds / 0.2 + 1e-9))
    assert len(timevarying_fluctuation(x).values) == len(timevarying_loudness(x))
    assert timevarying_roughness(x).frame_period_s == 0.2
    assert timevarying_fluctuation(x).frame_period_s == timevarying_loudness(x).frame_period_s == 0.002


# ---------------------------------------------------------------- roughness

def _rough(mod_hz, depth=1.0, seconds=2.0):
    return timevarying_roughness(pure_tone(1000, 60, seconds, am_hz=mod_hz, am_depth=depth)).values.mean()


def test_asper_anchor_and_tuning():
    r70 = _rough(70)
    assert r70 == pytest.approx(1.0, rel=0.25)
    assert r70 > _rough(30) and r70 > _rough(200)
    assert _rough(0, 0.0) < 0.05


# ---------------------------------------------------------------- fluctuation

def _fluc(mod_hz, depth=1.0):
    return timevarying_fluctuation(pure_tone(1000, 60, 5.0, am_hz=mod_hz, am_depth=depth)).values.mean()


def test_vacil_anchor_and_tuning():
    f4 = _fluc(4)
    assert f4 == pytest.approx(1.0, rel=0.3)
    assert f4 > _fluc(1) and f4 > _fluc(16)
    assert _fluc(70) < 0.2 * f4
    assert _fluc(0, 0.0) < 0.05


# ---------------------------------------------------------------- statistics

def test_statistic_examples():
    assert impulse_factor([2, 2, 2, 2]) == 1.0
    assert impulse_factor([1, 1, 1, 5]) == 2.5
    assert variance([1, 1, 1]) == 0
    assert variance([0, 2]) == 1.0
    with pytest.raises(ZeroMean):
        impulse_factor([0.0, 0.0])
    with pytest.raises(TooFewValues):
        variance([1.0])
    with pytest.raises(TooFewValues):
        kurtosis([1.0, 2.0, 3.0])
    with pytest.raises(DegenerateVariance):
        kurtosis([4.0] * 10)


def test_kurtosis_of_sinusoid():
    t = np.arange(4000)
    assert kurtosis(np.sin(2 * np.pi * 5 * t / 4000)) == pytest.approx(1.5, abs=0.01)


def test_kurtosis_of_normal_draws():
    draws = np.random.default_rng(2024).standard_normal(10 ** 6)
    assert kurtosis(draws) == pytest.approx(3.0, abs=0.05)


@given(st.lists(st.floats(0.01, 1e3), min_size=1, max_size=50))
def test_impulse_factor_at_least_one(values):
    assert impulse_factor(values) >= 1 - 1e-12


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=50), st.floats(-1e3, 1e3))
def test_variance_shift_invariant(values, c):
    v = np.array(values)
    assert variance(v + c) == pytest.approx(variance(v), rel=1e-6, abs=1e-6)


def _series(values):
    return LoudnessSeries(np.asarray(values, dtype=float))


def _amplitude(x, freq, rate=500.0):
    t = np.arange(x.size) / rate
    basis = np.stack([np.cos(2 * np.pi * freq * t), np.sin(2 * np.pi * freq * t)], 1)
    return np.hypot(*np.linalg.lstsq(basis, x - x.mean(), rcond=None)[0])


def test_highpass_constant_and_tones():
    np.testing.assert_allclose(highpass_loudness(_series(np.full(2500, 3.0))).values, 3.0, rtol=1e-12)
    t = np.arange(2500) / 500.0
    slow = highpass_loudness(_series(5 + np.sin(2 * np.pi * 2 * t))).values
    fast = highpass_loudness(_series(5 + np.sin(2 * np.pi * 50 * t))).values
    assert slow.mean() == pytest.approx(5.0, rel=1e-4) and fast.mean() == pytest.approx(5.0, rel=1e-4)
    assert 20 * np.log10(_amplitude(slow, 2)) <= -40
    assert _amplitude(fast, 50) == pytest.approx(1.0, rel=0.05)
    with pytest.raises(SeriesTooShort):
        highpass_loudness(_series(np.ones(1125)))


# ---------------------------------------------------------------- feature vectors

def test_spa_of_quiet_tone():
    v = spa_features(pure_tone(1000, 40, 2.0))
    assert v.names == SPA_NAMES
    assert v["spa_loudness"] == pytest.approx(1.0, rel=0.1)
    assert v["spa_roughness"] < 0.05 and v["spa_fluctuation"] < 0.05


def test_spa_loudness_grows_with_level():
    x = pure_tone(1000, 40, 1.0)
    assert spa_features(x.scaled(10 ** 0.5))["spa_loudness"] > spa_features(x)["spa_loudness"]


def test_tvpa_steady_tone_and_burst():
    steady = pure_tone(1000, 60, 5.0)
    v = tvpa_features(steady)
    assert v.names == TVPA_NAMES
    assert v["tvpa_roughness_variance"] < 1e-6
    x = steady.samples.copy()
    i = int(2.5 * 48000)
    x[i:i + 960] *= 10 ** (30 / 20)
    burst = tvpa_features(TimeSignal(x, 48000))
    assert burst["tvpa_loudness_impulse_factor"] > v["tvpa_loudness_impulse_factor"]
