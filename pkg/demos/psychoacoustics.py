"""Loudness, roughness and fluctuation strength on calibration tones.

Run: python demos/psychoacoustics.py
"""

from gearacoustics.psycho import (spa_features, stationary_loudness, timevarying_fluctuation,
                                  timevarying_roughness, tvpa_features)
from gearacoustics.synth import pure_tone

for level in (40, 50, 60, 70):
    sone, _ = stationary_loudness(pure_tone(1000, level, 1.0))
    print(f"1 kHz at {level} dB SPL: {sone:.2f} sone")

print("\nroughness of a 60 dB 1 kHz tone, 100% AM")
for fm in (10, 30, 50, 70, 100, 200):
    r = timevarying_roughness(pure_tone(1000, 60, 2.0, am_hz=fm, am_depth=1.0)).values.mean()
    print(f"  {fm:4d} Hz: {r:.2f} asper")

print("\nfluctuation strength, same carrier")
for fm in (0.5, 1, 2, 4, 8, 16):
    f = timevarying_fluctuation(pure_tone(1000, 60, 5.0, am_hz=fm, am_depth=1.0)).values.mean()
    print(f"  {fm:4} Hz: {f:.2f} vacil")

tone = pure_tone(1000, 60, 5.0, am_hz=4, am_depth=0.5)
print("\nSPA ", dict(zip(spa_features(tone).names, map(lambda v: round(v, 4), spa_features(tone).values))))
print("TVPA", dict(zip(tvpa_features(tone).names, map(lambda v: round(v, 4), tvpa_features(tone).values))))
