"""A miniature version of the full benchmark, entirely in memory.

Train the one-class model on healthy and minor-fault motors, score a test
set with contaminated recordings and compare feature sets by AUC.

Run: python demos/small_benchmark.py
"""

import dataclasses

import numpy as np

from gearacoustics import load_config
from gearacoustics.pipeline import FeatureTable, evaluate_tables, extract_feature_sets
from gearacoustics.synth import plan_dataset, synthesize_motor_sound

cfg = load_config()
ds = dataclasses.replace(cfg.dataset, train_healthy=10, train_minor=8, test_healthy=8, test_minor=8,
                         test_major=8, noisy_test=10, duration_s=3.0)
plan = plan_dataset(ds, seed=7)
print(f"{len(plan)} recordings, {sum(p[0].noise.kind != 'none' for p in plan)} contaminated")

rows = []
for sample, spec, seed in plan:
    x = synthesize_motor_sound(spec, sample.noise, ds.duration_s, ds.sample_rate_hz, seed)
    rows.append(extract_feature_sets(x, cfg))

samples = [p[0] for p in plan]
tables = {}
for name in cfg.feature_sets:
    vecs = [r[name] for r in rows]
    tables[name] = FeatureTable(name, vecs[0].names, tuple(s.id for s in samples),
                                tuple(s.label for s in samples), tuple(s.split for s in samples),
                                np.array([v.values for v in vecs]))

report = evaluate_tables(tables, cfg.with_seed(7))
print(report.to_csv())
