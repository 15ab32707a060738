"""Envelope spectra of a faulty motor, with and without a hammer blow.

Run: python demos/envelope_spectra.py
"""

import numpy as np

from gearacoustics import EnvelopeKind, envelope_spectrum, enumerate_fault_frequencies, extract_expert_features
from gearacoustics.synth import REFERENCE_GEOMETRY, NoiseSpec, SyntheticMotorSpec, synthesize_motor_sound

# a major fault on the motor shaft: one impulse per revolution (22.9 Hz)
spec = SyntheticMotorSpec(REFERENCE_GEOMETRY, "major_fault", resonance_hz=3000.0, impulse_gain=1.0, fault_shaft=1)
clean = synthesize_motor_sound(spec, seed=1)
noisy = synthesize_motor_sound(spec, NoiseSpec("hammering", 6.0), seed=1)

ffs = enumerate_fault_frequencies(REFERENCE_GEOMETRY)
print("fault frequencies:", ", ".join(f"{l}={f:.2f}" for l, f in ffs.entries[:4]), "...")

for kind in EnvelopeKind:
    a = envelope_spectrum(clean, kind)
    b = envelope_spectrum(noisy, kind)
    fa = extract_expert_features(a, ffs)["shaft1_k1"]
    fb = extract_expert_features(b, ffs)["shaft1_k1"]
    # peak height over the spectrum median, in dB of the plotted quantity
    ra = 10 * np.log10(fa / np.median(a.magnitudes[1:]))
    rb = 10 * np.log10(fb / np.median(b.magnitudes[1:]))
    print(f"{kind.value}: 22.9 Hz peak {ra:5.1f} dB over median clean, {rb:5.1f} dB with hammering")

# the log envelope does not care about overall gain
x = envelope_spectrum(clean, "LES").magnitudes[1:]
y = envelope_spectrum(clean.scaled(10.0), "LES").magnitudes[1:]
print("LES(10x) vs LES(x), max relative change:", float(np.max(np.abs(y - x) / (x + 1e-12 * x.max()))))
