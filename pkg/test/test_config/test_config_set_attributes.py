import pytest
from pathlib import Path
from relmem.prog import (  # type: ignore
    ConfigManager,
    DataConfig,
    GeneralConfig,
    ModelConfig,
    TrainConfig,
)


# Tests for GeneralConfig
@pytest.mark.parametrize(
    "property_name, valid_value, invalid_value, expected_exception",
    [
        ("verbosity", 2, "high", TypeError),
        ("verbosity", 2, 4, ValueError),
        ("verbosity", -1, True, TypeError),
        ("print_config", True, "yes", TypeError),
        ("parallel", 4, 0, ValueError),
        ("parallel", 4, "four", TypeError),
        ("methods", ["gcl", "er"], ["gcl", "replay"], ValueError),
        ("methods", ["finetune"], [], ValueError),
        ("methods", ["er"], ["er", "er"], ValueError),
        ("methods", ["gcl"], [1], TypeError),
        ("seeds", [0, 1], [-1], ValueError),
        ("seeds", [3], [1, 1], ValueError),
        ("seeds", [2], ["2"], TypeError),
        ("seeds", [0], [], ValueError),
    ],
)
def test_general_config_property_setters(
    property_name, valid_value, invalid_value, expected_exception
):
    config = GeneralConfig()

    # Test valid value
    setattr(config, property_name, valid_value)
    assert getattr(config, property_name) == valid_value

    # Test invalid value
    with pytest.raises(expected_exception):
        setattr(config, property_name, invalid_value)


def test_general_config_shorthands():
    config = GeneralConfig()
    config.methods = "gcl, finetune"
    assert config.methods == ["gcl", "finetune"]
    config.seeds = 7
    assert config.seeds == [7]
    config.out_dir = "some/dir"
    assert config.out_dir == Path("some/dir")
    with pytest.raises(ValueError):
        config.out_dir = ""
    with pytest.raises(TypeError):
        config.out_dir = 3


@pytest.mark.parametrize(
    "property_name, initial_value",
    [
        ("verbosity", 1),
        ("print_config", False),
        ("parallel", 1),
        ("methods", ["gcl", "er", "finetune"]),
        ("seeds", [0, 1, 2, 3, 4]),
        ("out_dir", Path("results")),
    ],
)
def test_general_config_default_values(property_name, initial_value):
    config = GeneralConfig()
    assert getattr(config, property_name) == initial_value


# Tests for DataConfig
@pytest.mark.parametrize(
    "property_name, valid_value, invalid_value, expected_exception",
    [
        ("family", "rotated", "shuffled", ValueError),
        ("family", "permuted", 1, TypeError),
        ("num_tasks", 3, 0, ValueError),
        ("num_tasks", 3, 2.0, TypeError),
        ("classes_per_task", 1, 0, ValueError),
        ("max_degrees", 90.0, 400.0, ValueError),
        ("max_degrees", 45, "45", TypeError),
        ("num_classes", 4, 1, ValueError),
        ("grid", 4, 0, ValueError),
        ("radius", 1.5, 0.0, ValueError),
        ("sigma", 0.3, -0.1, ValueError),
        ("sigma", 0.3, None, TypeError),
        ("train_per_class", 20, 0, ValueError),
        ("test_per_class", 5, "5", TypeError),
    ],
)
def test_data_config_property_setters(
    property_name, valid_value, invalid_value, expected_exception
):
    config = DataConfig()

    setattr(config, property_name, valid_value)
    assert getattr(config, property_name) == valid_value

    with pytest.raises(expected_exception):
        setattr(config, property_name, invalid_value)


def test_data_config_blob_spec():
    config = DataConfig()
    config.grid = 3
    config.num_classes = 4
    spec = config.blob_spec()
    assert spec.input_dim == 9
    assert spec.num_classes == 4
    assert spec.train_per_class == 500


# Tests for ModelConfig
@pytest.mark.parametrize(
    "property_name, valid_value, invalid_value, expected_exception",
    [
        ("trunk_widths", [32], [0], ValueError),
        ("trunk_widths", [32, 16], (32,), TypeError),
        ("d1", 8, 0, ValueError),
        ("d_img", 8, "8", TypeError),
        ("d_lab", 4, -2, ValueError),
    ],
)
def test_model_config_property_setters(
    property_name, valid_value, invalid_value, expected_exception
):
    config = ModelConfig()

    setattr(config, property_name, valid_value)
    assert getattr(config, property_name) == valid_value

    with pytest.raises(expected_exception):
        setattr(config, property_name, invalid_value)


def test_model_config_arch_config():
    config = ModelConfig()
    config.trunk_widths = [10]
    arch = config.arch_config(input_dim=16, num_classes=5)
    assert arch.input_dim == 16
    assert arch.num_classes == 5
    assert arch.trunk_widths == (10,)
    assert arch.d2 == 32 + 16


# Tests for TrainConfig
@pytest.mark.parametrize(
    "property_name, valid_value, invalid_value, expected_exception",
    [
        ("method", "er", "ewc", ValueError),
        ("method", "finetune", None, TypeError),
        ("batch_size", 5, 0, ValueError),
        ("memory_capacity", 0, -1, ValueError),
        ("memory_capacity", 20, 20.5, TypeError),
        ("epochs_per_task", 2, 0, ValueError),
        ("optimizer", "sgd", "rmsprop", ValueError),
        ("learning_rate", 0.01, 0.0, ValueError),
        ("beta1", 0.5, 1.0, ValueError),
        ("beta2", 0.99, -0.1, ValueError),
        ("adam_eps", 1e-6, 0.0, ValueError),
        ("lambda_c", 0.0, -1.0, ValueError),
        ("lambda_t", 2.0, "2", TypeError),
        ("lambda_g", 0.0, -50.0, ValueError),
        ("tau_init", 0.5, 0.0, ValueError),
        ("temp_context", 0.5, 0.0, ValueError),
        ("temp_target", 2.0, -5.0, ValueError),
        ("test_samples", 1, 0, ValueError),
        ("deterministic_edges", True, 1, TypeError),
        ("reg_rows", "latest", "all", ValueError),
    ],
)
def test_train_config_property_setters(
    property_name, valid_value, invalid_value, expected_exception
):
    config = TrainConfig()

    setattr(config, property_name, valid_value)
    assert getattr(config, property_name) == valid_value

    with pytest.raises(expected_exception):
        setattr(config, property_name, invalid_value)


@pytest.mark.parametrize(
    "property_name, initial_value",
    [
        ("method", "gcl"),
        ("batch_size", 10),
        ("memory_capacity", 50),
        ("optimizer", "adam"),
        ("learning_rate", 0.005),
        ("tau_init", 10.0),
        ("lambda_c", 1.0),
        ("lambda_t", 1.0),
        ("lambda_g", 50.0),
        ("temp_context", 0.5),
        ("temp_target", 1.0),
        ("test_samples", 30),
        ("deterministic_edges", False),
        ("reg_rows", "consolidated"),
    ],
)
def test_train_config_default_values(property_name, initial_value):
    config = TrainConfig()
    assert getattr(config, property_name) == initial_value


def test_train_config_derived_objects():
    config = TrainConfig()
    config.lambda_g = 10.0
    config.tau_init = 0.5
    weights = config.loss_weights()
    assert weights.lambda_g == 10.0
    kernel = config.kernel_params()
    assert kernel.tau.item() == 0.5
    assert kernel.tau.requires_grad
    assert kernel.concrete_temp_g == 0.5
    assert kernel.concrete_temp_a == 1.0
    # every call starts from a fresh bandwidth
    assert config.kernel_params().tau is not kernel.tau


# Tests for ConfigManager
def test_check_config_class_budget():
    config = ConfigManager()
    config.data.num_tasks = 6
    with pytest.raises(ValueError, match="class budget"):
        config.check_config(verbosity=0)
    config.data.family = "permuted"
    config.check_config(verbosity=0)


def test_check_config_memory_required():
    config = ConfigManager()
    config.train.memory_capacity = 0
    with pytest.raises(ValueError, match="memory capacity"):
        config.check_config(verbosity=0)
    config.general.methods = ["finetune"]
    config.check_config(verbosity=0)


def test_num_workers_respects_thread_cap(monkeypatch):
    config = ConfigManager()
    config.general.parallel = 64
    monkeypatch.setenv("RELMEM_THREADS", "1")
    assert config.num_workers() == 1
    monkeypatch.setenv("RELMEM_THREADS", "many")
    with pytest.raises(ValueError):
        config.num_workers()
    monkeypatch.delenv("RELMEM_THREADS")
    config.general.parallel = 1
    assert config.num_workers() == 1


def test_load_from_dict_unknown_section():
    config = ConfigManager()
    with pytest.raises(KeyError):
        config.load_from_dict({"optimizer": {"name": "adam"}})


@pytest.mark.parametrize(
    "section, key",
    [
        ("train", "lamda_g"),
        ("data", "train_per_clas"),
        ("general", "_verbosity"),
        ("model", "get_identifier"),
    ],
)
def test_load_from_dict_unknown_key_in_section(section, key):
    config = ConfigManager()
    with pytest.raises(KeyError, match=key):
        config.load_from_dict({section: {key: 1}})
    assert config.train.lambda_g == 50.0


def test_load_from_dict_skips_none():
    config = ConfigManager()
    config.load_from_dict({"train": {"lambda_g": None, "batch_size": 4}})
    assert config.train.lambda_g == 50.0
    assert config.train.batch_size == 4


def test_config_str_lists_sections():
    text = str(ConfigManager())
    for section in ("General", "Data", "Model", "Train"):
        assert f"{section} configuration:" in text
    assert "lambda_g" in text
