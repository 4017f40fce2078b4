import pytest

from geometry import ConfigError
from settings import RunConfig, build_config


def test_defaults():
    config = build_config(environ={})
    assert config == RunConfig()
    assert config.seed == 0 and config.jobs == 1
    assert config.slice_settings().n_theta == 720
    assert config.show_progress


def test_environment_overrides_defaults():
    config = build_config(environ={"CYLPACK_SEED": "42", "CYLPACK_AREA_TOL": "1e-8", "CYLPACK_JOBS": " 3 "})
    assert config.seed == 42
    assert config.jobs == 3
    assert config.area_tol == 1e-8


def test_file_overrides_environment(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("CYLPACK_SEED=7\nn_theta=256\nreproducible=true\n")
    config = build_config(config_file=str(path), environ={"CYLPACK_SEED": "42"})
    assert config.seed == 7
    assert config.n_theta == 256
    assert config.reproducible
    assert not config.show_progress


def test_flags_override_everything(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("seed=7\n")
    config = build_config({"seed": 9, "jobs": None}, str(path), {"CYLPACK_SEED": "42"})
    assert config.seed == 9
    assert config.jobs == 1


def test_unknown_file_key(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("colour=blue\n")
    with pytest.raises(ConfigError, match="unknown config key"):
        build_config(config_file=str(path), environ={})


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        build_config(config_file=str(tmp_path / "absent.env"), environ={})


def test_unparseable_value():
    with pytest.raises(ConfigError):
        build_config(environ={"CYLPACK_SEED": "many"})


@pytest.mark.parametrize(
    "flags",
    [
        {"area_tol": 0.0},
        {"membership_tol": -1e-9},
        {"seed": -1},
        {"seed": 1 << 64},
        {"jobs": 0},
        {"n_theta": 8},
        {"format": "png"},
    ],
)
def test_rejected_values(flags):
    with pytest.raises(ConfigError):
        build_config(flags, environ={})


def test_to_dict_lists_every_field():
    data = RunConfig(seed=5).to_dict()
    assert data["seed"] == 5
    assert set(data) >= {"area_tol", "membership_tol", "event_tol", "n_theta", "output_dir"}
