from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from gearacoustics.config import DEFAULT_TOML, FEATURE_SETS, PipelineConfig, config_digest, load_config
from gearacoustics.errors import InvalidConfig

ROOT = Path(__file__).resolve().parents[1]


def test_defaults():
    cfg = load_config()
    a = cfg.analysis
    assert (a.lower_hz, a.upper_hz, a.min_fault_hz, a.tolerance, a.k_max) == (1150.0, 5100.0, 10.0, 0.01, 4)
    assert cfg.geometry.teeth == (16, 40, 12, 48) and cfg.geometry.rated_speed_rpm == 1375.0
    assert (cfg.occ.bag_count, cfg.occ.prototype_fraction, cfg.occ.seed) == (100, 0.1, 42)
    assert cfg.feature_sets == FEATURE_SETS
    assert cfg.digest == config_digest(b"")


def test_documented_defaults_match(tmp_path):
    path = tmp_path / "d.toml"
    path.write_text(DEFAULT_TOML)
    cfg = load_config(path)
    assert cfg == PipelineConfig(data_dir=tmp_path / "data", out_dir=tmp_path / "out")
    assert (ROOT / "default.toml").read_text() == DEFAULT_TOML


def test_seed_override_reaches_classifier(tmp_path):
    cfg = load_config().with_seed(7)
    assert cfg.seed == 7 and cfg.occ.seed == 7


@pytest.mark.parametrize("text", ["colour = 1", "[analysis]\nlower = 3", "[analysis]\nlower_hz = 6000.0",
                                  "[benchmark]\nfeature_sets = ['mfcc']", "seed = 'x'", "[occ]\nbag_count = 0",
                                  "[dataset]\nencoding = 'mp3'", "[dataset]\ntrain_healthy = -2", "not toml ="])
def test_invalid(tmp_path, text):
    path = tmp_path / "bad.toml"
    path.write_text(text)
    with pytest.raises(InvalidConfig):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(InvalidConfig):
        load_config(tmp_path / "absent.toml")


def test_paths_relative_to_config(tmp_path):
    path = tmp_path / "sub" / "c.toml"
    path.parent.mkdir()
    path.write_text('[paths]\ndata_dir = "d"\nout_dir = "o"\n')
    cfg = load_config(path)
    assert cfg.data_dir == tmp_path / "sub" / "d" and cfg.out_dir == tmp_path / "sub" / "o"


@given(st.text(alphabet="abcdefghij \n", max_size=40))
def test_digest_tracks_every_byte(comment):
    base = DEFAULT_TOML.encode()
    edited = base + b"# " + comment.encode() + b"\n"
    assert config_digest(base) == config_digest(bytes(base))
    assert config_digest(edited) != config_digest(base)
