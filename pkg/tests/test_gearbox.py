from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gearacoustics.dsp import SpectrumBins
from gearacoustics.errors import SpectrumTooNarrow
from gearacoustics.gearbox import GearGeometry, enumerate_fault_frequencies, extract_expert_features, shaft_frequencies

REF = GearGeometry(1375.0, (16, 40, 12, 48))


def test_reference_shaft_speeds():
    np.testing.assert_allclose(shaft_frequencies(REF), [22.9166667, 9.1666667, 2.2916667], rtol=1e-7)
    assert REF.total_ratio == 10


def test_unity_stage():
    f = shaft_frequencies(GearGeometry(600.0, (20, 20)))
    assert f[0] == f[1] == 10.0


def test_reference_fault_frequency_set():
    f1 = 1375 / 60
    f2 = f1 * 16 / 40
    f3 = f2 * 12 / 48
    m1, m2 = 16 * f1, 12 * f2
    expected = [f1, 2 * f1, 3 * f1, 4 * f1, 2 * f2, 3 * f2, 4 * f2, m1, m2,
                m1 - f1, m1 + f1, m1 - f2, m1 + f2, m2 - f2, m2 + f2, m2 - f3, m2 + f3]
    ffs = enumerate_fault_frequencies(REF)
    np.testing.assert_allclose(ffs.frequencies_hz, expected, rtol=1e-12)
    np.testing.assert_allclose(ffs.frequencies_hz[:4], [22.92, 45.83, 68.75, 91.67], atol=0.005)
    np.testing.assert_allclose(ffs.frequencies_hz[4:7], [18.33, 27.5, 36.67], atol=0.005)
    assert ffs.frequencies_hz[7] == pytest.approx(366.67, abs=0.005)
    assert ffs.frequencies_hz[8] == pytest.approx(110.0, abs=1e-9)
    np.testing.assert_allclose(ffs.frequencies_hz[13:], [100.83, 119.17, 107.71, 112.29], atol=0.005)
    assert len(set(ffs.labels)) == len(ffs)


@given(st.floats(100, 6000), st.lists(st.integers(4, 120), min_size=2, max_size=6).filter(lambda z: len(z) % 2 == 0),
       st.floats(0, 50))
def test_enumeration_properties(rpm, teeth, floor):
    g = GearGeometry(rpm, tuple(teeth))
    f = shaft_frequencies(g)
    ratio = Fraction(1)
    for s in range(g.stage_count):
        ratio *= Fraction(teeth[2 * s + 1], teeth[2 * s])
    assert g.total_ratio == ratio
    assert f[0] / f[-1] == pytest.approx(float(ratio), rel=1e-12)
    ffs = enumerate_fault_frequencies(g, 4, floor)
    assert np.all(ffs.frequencies_hz >= floor)
    assert len(set(ffs.labels)) == len(ffs)
    assert ffs.labels == enumerate_fault_frequencies(g, 4, floor).labels


def _spectrum(peaks, res=0.1, top=500.0, background=0.01):
    freqs = np.arange(0, top + res / 2, res)
    mags = np.full(freqs.size, background)
    for f, a in peaks:
        mags[int(round(f / res))] = a
    return SpectrumBins(freqs, mags, res)


def test_window_captures_and_rejects():
    from gearacoustics.gearbox import FaultFrequencySet
    ffs = FaultFrequencySet((("ff", 30.0),))
    assert extract_expert_features(_spectrum([(30.1, 0.9)]), ffs).values == (0.9,)
    assert extract_expert_features(_spectrum([(30.5, 0.9)]), ffs).values == (0.01,)


def test_jitter_window_on_reference_set():
    ffs = enumerate_fault_frequencies(REF)
    res = 0.001
    for i, ff in enumerate(ffs.frequencies_hz):
        inside = extract_expert_features(_spectrum([(ff * 1.005, 1.0)], res), ffs).values[i]
        outside = extract_expert_features(_spectrum([(ff * 1.02, 1.0)], res), ffs).values[i]
        assert inside == 1.0 and outside == 0.01


def test_feature_order_and_names():
    ffs = enumerate_fault_frequencies(REF)
    v = extract_expert_features(_spectrum([]), ffs, prefix="les_")
    assert len(v) == len(ffs) and v.names == tuple("les_" + l for l in ffs.labels)


@given(st.floats(0.0, 0.05), st.floats(0.0, 0.05))
def test_tolerance_monotone(t1, t2):
    lo, hi = sorted((t1, t2))
    ffs = enumerate_fault_frequencies(REF)
    s = SpectrumBins(np.arange(5001) * 0.1, np.random.default_rng(3).random(5001), 0.1)
    a = np.array(extract_expert_features(s, ffs, lo).values)
    b = np.array(extract_expert_features(s, ffs, hi).values)
    assert np.all(b >= a)


def test_too_narrow():
    with pytest.raises(SpectrumTooNarrow):
        extract_expert_features(_spectrum([], top=200.0), enumerate_fault_frequencies(REF))
