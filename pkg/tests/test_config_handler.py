import json
import os

from badicdim.components.config_handler import ConfigOperation, config_file_manager, load_estimate_config, \
    load_extract_config, load_generator_config, load_verify_config
from badicdim.components.definitions import ConfigType, EstimateConfig, ExtractConfig, GeneratorConfig, \
    VerifyConfig


def test_missing_file_writes_defaults(project_dir):
    config = load_estimate_config()
    assert config == EstimateConfig()
    path = os.path.join(project_dir, ConfigType.EstimateConfig.value)
    with open(path) as f:
        assert json.loads(f.read()) == {"workers": 1, "decimals": 6, "report_kind": "star-local"}


def test_defaults_of_every_config():
    assert load_extract_config() == ExtractConfig(retry_limit=64, offset_bits=62, strict=False, stages=1,
                                                  strategy="greedy", exact_denominator_limit=64)
    assert load_verify_config() == VerifyConfig(samples=100, trees=200, random_prunes=1000)
    assert load_generator_config() == GeneratorConfig(size_guard=65536, max_packing_candidates=20)


def test_saved_config_is_loaded_back():
    config_file_manager(ConfigOperation.SAVE, ConfigType.VerifyConfig, config_to_save=VerifyConfig(samples=7))
    assert load_verify_config().samples == 7
    assert load_verify_config().trees == 200


def test_unknown_keys_are_ignored(project_dir):
    with open(os.path.join(project_dir, ConfigType.ExtractConfig.value), "w") as f:
        f.write(json.dumps({"strict": True, "colour": "blue"}))
    config = load_extract_config()
    assert config.strict is True
    assert config.retry_limit == 64


def test_corrupt_file_falls_back_to_defaults(project_dir):
    with open(os.path.join(project_dir, ConfigType.GeneratorConfig.value), "w") as f:
        f.write("{not json")
    assert load_generator_config() == GeneratorConfig()


def test_no_project_dir_uses_defaults(monkeypatch):
    monkeypatch.setattr("badicdim.components.config_handler.get_project_dir", lambda: None)
    assert load_estimate_config() == EstimateConfig()
