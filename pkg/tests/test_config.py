from pathlib import Path

import pytest
import yaml

from config import DEFAULT_CONFIG, ConfigManager, _deep_merge, section
from core.errors import ConfigError


def test_missing_file_means_defaults_without_writing(tmp_path: Path) -> None:
    p = tmp_path / "fraclap.yaml"
    cfg = ConfigManager(str(p)).load()
    assert not p.exists()
    assert cfg["weights"]["family"] == "PER"
    assert cfg["grid"]["h"] == 0.125


def test_create_missing_writes_defaults(tmp_path: Path) -> None:
    p = tmp_path / "fraclap.yaml"
    ConfigManager(str(p)).load(create_missing=True)
    assert p.exists()
    assert yaml.safe_load(p.read_text())["output"]["precision"] == 17


def test_default_config_not_mutated_across_loads(tmp_path: Path) -> None:
    a = ConfigManager(str(tmp_path / "a.yaml")).load()
    a["converge"]["h_list"].append(0.001)
    b = ConfigManager(str(tmp_path / "b.yaml")).load()
    assert b["converge"]["h_list"] == DEFAULT_CONFIG["converge"]["h_list"]
    assert 0.001 not in DEFAULT_CONFIG["converge"]["h_list"]


def test_deep_merge_preserves_unspecified_nested_keys() -> None:
    base = {"a": {"x": 1, "y": 2}, "b": 3}
    overlay = {"a": {"y": 20}}
    out = _deep_merge(base, overlay)
    assert out == {"a": {"x": 1, "y": 20}, "b": 3}
    # base unchanged
    assert base == {"a": {"x": 1, "y": 2}, "b": 3}


def test_load_merges_file_over_defaults(tmp_path: Path) -> None:
    p = tmp_path / "fraclap.yaml"
    p.write_text(yaml.safe_dump({"weights": {"family": "Q", "alpha": 0.8}}))
    cfg = ConfigManager(str(p)).load()
    assert cfg["weights"]["family"] == "Q"
    assert cfg["weights"]["alpha"] == 0.8
    # Defaults still present
    assert cfg["weights"]["m"] is None
    assert cfg["grid"]["L"] == 8.0


def test_unreadable_file_is_a_config_error(tmp_path: Path) -> None:
    p = tmp_path / "fraclap.yaml"
    p.write_text("this is: : not yaml: [")
    with pytest.raises(ConfigError, match="not a YAML mapping"):
        ConfigManager(str(p)).load()
    p.write_text("- grid\n- weights\n")
    with pytest.raises(ConfigError):
        ConfigManager(str(p)).load()


def test_unknown_sections_are_kept_but_logged(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    p = tmp_path / "fraclap.yaml"
    p.write_text(yaml.safe_dump({"grdi": {"h": 0.5}}))
    cfg = ConfigManager(str(p)).load()
    assert cfg["grid"]["h"] == 0.125
    assert "grdi" in caplog.text


def test_overlay_layers_flags_without_persisting(tmp_path: Path) -> None:
    p = tmp_path / "fraclap.yaml"
    p.write_text(yaml.safe_dump({"grid": {"h": 0.0625}}))
    cm = ConfigManager(str(p))
    cm.load()
    settings = cm.overlay({"grid": {"L": 4.0}, "weights": {"alpha": 1.5}})
    assert settings["grid"] == {"h": 0.0625, "L": 4.0}
    assert settings["weights"]["alpha"] == 1.5
    # The loaded config and the file are untouched.
    assert cm.get()["grid"]["L"] == 8.0
    assert yaml.safe_load(p.read_text()) == {"grid": {"h": 0.0625}}


def test_update_persists(tmp_path: Path) -> None:
    p = tmp_path / "fraclap.yaml"
    cm = ConfigManager(str(p))
    cm.load()
    new = cm.get()
    new["evolve"]["kappa"] = 0.1
    cm.update(new)

    cfg2 = ConfigManager(str(p)).load()
    assert cfg2["evolve"]["kappa"] == 0.1
    assert not (tmp_path / "fraclap.yaml.tmp").exists()


def test_section_rejects_scalar_replacement() -> None:
    with pytest.raises(ConfigError):
        section({"grid": 3}, "grid")
    assert section({"grid": None}, "grid") == {}
    assert section({}, "grid") == {}


def test_version_starts_at_zero_before_load(tmp_path: Path) -> None:
    cm = ConfigManager(str(tmp_path / "fraclap.yaml"))
    assert cm.version == 0


def test_version_bumps_on_load_and_update(tmp_path: Path) -> None:
    cm = ConfigManager(str(tmp_path / "fraclap.yaml"))
    cm.load()
    after_load = cm.version
    assert after_load > 0
    cm.update(cm.get())
    assert cm.version == after_load + 1
