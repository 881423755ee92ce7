"""
Contains the configuration Class for the program.
"""

from __future__ import annotations

import json
import multiprocessing as mp
import os
import warnings
from abc import ABC, abstractmethod
from pathlib import Path

import toml

from ..data import BlobSpec
from ..nets import ArchConfig
from ..objective import LossWeights
from ..relgraph import KernelParams

METHODS = ("gcl", "er", "finetune")
FAMILIES = ("split", "permuted", "rotated")
OPTIMIZERS = ("adam", "sgd")
REG_ROWS = ("consolidated", "latest")
THREADS_ENV = "RELMEM_THREADS"


def _is_int(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


# abstract base class for configuration
class BaseConfig(ABC):
    """
    Abstract base class for configuration settings.
    """

    @abstractmethod
    def __init__(self):
        pass

    @abstractmethod
    def get_identifier(self) -> str:
        """
        Get the identifier of the configuration.
        """


class GeneralConfig(BaseConfig):
    """
    Configuration class for general settings.
    """

    def __init__(self: GeneralConfig) -> None:
        self._verbosity: int = 1
        self._parallel: int = 1
        self._print_config: bool = False
        self._methods: list[str] = list(METHODS)
        self._seeds: list[int] = [0, 1, 2, 3, 4]
        self._out_dir: Path = Path("results")

    def get_identifier(self) -> str:
        return "general"

    @property
    def verbosity(self):
        """
        Get the verbosity level.
        """
        return self._verbosity

    @verbosity.setter
    def verbosity(self, verbosity: int):
        """
        Set the verbosity level.
        """
        if not _is_int(verbosity):
            raise TypeError("Verbosity should be an integer.")
        if verbosity not in [-1, 0, 1, 2, 3]:
            raise ValueError("Verbosity can only be -1, 0, 1, 2, or 3.")
        self._verbosity = verbosity

    @property
    def parallel(self):
        """
        Get the number of parallel worker processes.
        """
        return self._parallel

    @parallel.setter
    def parallel(self, parallel: int):
        """
        Set the number of parallel worker processes.
        """
        if not _is_int(parallel):
            raise TypeError("Parallel should be an integer.")
        if parallel < 1:
            raise ValueError("Parallel should be greater than 0.")
        self._parallel = parallel

    @property
    def print_config(self):
        """
        Get the print config flag.
        """
        return self._print_config

    @print_config.setter
    def print_config(self, print_config: bool):
        """
        Set the print config flag.
        """
        if not isinstance(print_config, bool):
            raise TypeError("Print config should be a boolean.")
        self._print_config = print_config

    @property
    def methods(self):
        """
        Get the training methods to run.
        """
        return self._methods

    @methods.setter
    def methods(self, methods: list[str] | str):
        """
        Set the training methods to run.
        A single method name or a comma-separated string is accepted as well.
        """
        if isinstance(methods, str):
            methods = [m.strip() for m in methods.split(",") if m.strip()]
        if not isinstance(methods, list) or not all(isinstance(m, str) for m in methods):
            raise TypeError("Methods should be a list of strings.")
        if not methods:
            raise ValueError("At least one method is required.")
        for method in methods:
            if method not in METHODS:
                raise ValueError(f"Unknown method '{method}'. Choose from {list(METHODS)}.")
        if len(set(methods)) != len(methods):
            raise ValueError("Methods should not be repeated.")
        self._methods = list(methods)

    @property
    def seeds(self):
        """
        Get the seeds to run.
        """
        return self._seeds

    @seeds.setter
    def seeds(self, seeds: list[int] | int):
        """
        Set the seeds to run. A single integer is accepted as well.
        """
        if _is_int(seeds):
            seeds = [seeds]  # type: ignore[list-item]
        if not isinstance(seeds, list) or not all(_is_int(s) for s in seeds):
            raise TypeError("Seeds should be a list of integers.")
        if not seeds:
            raise ValueError("At least one seed is required.")
        if any(s < 0 for s in seeds):
            raise ValueError("Seeds should be non-negative.")
        if len(set(seeds)) != len(seeds):
            raise ValueError("Seeds should not be repeated.")
        self._seeds = list(seeds)

    @property
    def out_dir(self):
        """
        Get the output directory.
        """
        return self._out_dir

    @out_dir.setter
    def out_dir(self, out_dir: str | Path):
        """
        Set the output directory.
        """
        if not isinstance(out_dir, (str, Path)):
            raise TypeError("Output directory should be a string or a Path.")
        if str(out_dir) == "":
            raise ValueError("Output directory should not be empty.")
        self._out_dir = Path(out_dir)


class DataConfig(BaseConfig):
    """
    Configuration class for the synthetic task streams.
    """

    def __init__(self: DataConfig) -> None:
        self._family: str = "split"
        self._num_tasks: int = 5
        self._classes_per_task: int = 2
        self._max_degrees: float = 180.0
        self._num_classes: int = 10
        self._grid: int = 8
        self._radius: float = 2.5
        self._sigma: float = 0.6
        self._train_per_class: int = 500
        self._test_per_class: int = 50

    def get_identifier(self) -> str:
        return "data"

    @property
    def family(self):
        """
        Get the task family.
        """
        return self._family

    @family.setter
    def family(self, family: str):
        """
        Set the task family.
        """
        if not isinstance(family, str):
            raise TypeError("Family should be a string.")
        if family not in FAMILIES:
            raise ValueError(f"Unknown family '{family}'. Choose from {list(FAMILIES)}.")
        self._family = family

    @property
    def num_tasks(self):
        """
        Get the number of tasks.
        """
        return self._num_tasks

    @num_tasks.setter
    def num_tasks(self, num_tasks: int):
        """
        Set the number of tasks.
        """
        if not _is_int(num_tasks):
            raise TypeError("Number of tasks should be an integer.")
        if num_tasks < 1:
            raise ValueError("Number of tasks should be greater than 0.")
        self._num_tasks = num_tasks

    @property
    def classes_per_task(self):
        """
        Get the number of classes per task (split family).
        """
        return self._classes_per_task

    @classes_per_task.setter
    def classes_per_task(self, classes_per_task: int):
        if not _is_int(classes_per_task):
            raise TypeError("Classes per task should be an integer.")
        if classes_per_task < 1:
            raise ValueError("Classes per task should be greater than 0.")
        self._classes_per_task = classes_per_task

    @property
    def max_degrees(self):
        """
        Get the maximum rotation angle in degrees (rotated family).
        """
        return self._max_degrees

    @max_degrees.setter
    def max_degrees(self, max_degrees: float):
        if not _is_number(max_degrees):
            raise TypeError("Maximum rotation angle should be a number.")
        if not 0.0 <= max_degrees <= 360.0:
            raise ValueError("Maximum rotation angle should be within [0, 360].")
        self._max_degrees = float(max_degrees)

    @property
    def num_classes(self):
        """
        Get the size of the class universe.
        """
        return self._num_classes

    @num_classes.setter
    def num_classes(self, num_classes: int):
        if not _is_int(num_classes):
            raise TypeError("Number of classes should be an integer.")
        if num_classes < 2:
            raise ValueError("Number of classes should be at least 2.")
        self._num_classes = num_classes

    @property
    def grid(self):
        """
        Get the side length of the feature grid.
        """
        return self._grid

    @grid.setter
    def grid(self, grid: int):
        if not _is_int(grid):
            raise TypeError("Grid side should be an integer.")
        if grid < 1:
            raise ValueError("Grid side should be greater than 0.")
        self._grid = grid

    @property
    def radius(self):
        """
        Get the radius of the sphere the class means are drawn from.
        """
        return self._radius

    @radius.setter
    def radius(self, radius: float):
        if not _is_number(radius):
            raise TypeError("Radius should be a number.")
        if radius <= 0:
            raise ValueError("Radius should be positive.")
        self._radius = float(radius)

    @property
    def sigma(self):
        """
        Get the isotropic noise level of the blobs.
        """
        return self._sigma

    @sigma.setter
    def sigma(self, sigma: float):
        if not _is_number(sigma):
            raise TypeError("Sigma should be a number.")
        if sigma <= 0:
            raise ValueError("Sigma should be positive.")
        self._sigma = float(sigma)

    @property
    def train_per_class(self):
        return self._train_per_class

    @train_per_class.setter
    def train_per_class(self, train_per_class: int):
        if not _is_int(train_per_class):
            raise TypeError("Training samples per class should be an integer.")
        if train_per_class < 1:
            raise ValueError("Training samples per class should be greater than 0.")
        self._train_per_class = train_per_class

    @property
    def test_per_class(self):
        return self._test_per_class

    @test_per_class.setter
    def test_per_class(self, test_per_class: int):
        if not _is_int(test_per_class):
            raise TypeError("Test samples per class should be an integer.")
        if test_per_class < 1:
            raise ValueError("Test samples per class should be greater than 0.")
        self._test_per_class = test_per_class

    def blob_spec(self) -> BlobSpec:
        """
        Blob parameters of this configuration.
        """
        return BlobSpec(
            num_classes=self._num_classes,
            grid=self._grid,
            radius=self._radius,
            sigma=self._sigma,
            train_per_class=self._train_per_class,
            test_per_class=self._test_per_class,
        )


class ModelConfig(BaseConfig):
    """
    Configuration class for the network dimensions.
    """

    def __init__(self: ModelConfig) -> None:
        self._trunk_widths: list[int] = [64, 64]
        self._d1: int = 32
        self._d_img: int = 32
        self._d_lab: int = 16

    def get_identifier(self) -> str:
        return "model"

    @property
    def trunk_widths(self):
        """
        Get the widths of the hidden trunk layers.
        """
        return self._trunk_widths

    @trunk_widths.setter
    def trunk_widths(self, trunk_widths: list[int]):
        """
        Set the widths of the hidden trunk layers.
        """
        if not isinstance(trunk_widths, list) or not all(_is_int(w) for w in trunk_widths):
            raise TypeError("Trunk widths should be a list of integers.")
        if any(w < 1 for w in trunk_widths):
            raise ValueError("Trunk widths should be greater than 0.")
        self._trunk_widths = list(trunk_widths)

    @property
    def d1(self):
        """
        Get the dimension of the kernel-space embeddings.
        """
        return self._d1

    @d1.setter
    def d1(self, d1: int):
        if not _is_int(d1):
            raise TypeError("d1 should be an integer.")
        if d1 < 1:
            raise ValueError("d1 should be greater than 0.")
        self._d1 = d1

    @property
    def d_img(self):
        return self._d_img

    @d_img.setter
    def d_img(self, d_img: int):
        if not _is_int(d_img):
            raise TypeError("d_img should be an integer.")
        if d_img < 1:
            raise ValueError("d_img should be greater than 0.")
        self._d_img = d_img

    @property
    def d_lab(self):
        return self._d_lab

    @d_lab.setter
    def d_lab(self, d_lab: int):
        if not _is_int(d_lab):
            raise TypeError("d_lab should be an integer.")
        if d_lab < 1:
            raise ValueError("d_lab should be greater than 0.")
        self._d_lab = d_lab

    def arch_config(self, input_dim: int, num_classes: int) -> ArchConfig:
        """
        Combine the network dimensions with the data dimensions.
        """
        return ArchConfig(
            input_dim=input_dim,
            num_classes=num_classes,
            trunk_widths=self._trunk_widths,
            d1=self._d1,
            d_img=self._d_img,
            d_lab=self._d_lab,
        )


class TrainConfig(BaseConfig):
    """
    Configuration class for the training loop.
    """

    def __init__(self: TrainConfig) -> None:
        self._method: str = "gcl"
        self._batch_size: int = 10
        self._memory_capacity: int = 50
        self._epochs_per_task: int = 1
        self._optimizer: str = "adam"
        self._learning_rate: float = 0.005
        self._beta1: float = 0.9
        self._beta2: float = 0.999
        self._adam_eps: float = 1e-8
        self._lambda_c: float = 1.0
        self._lambda_t: float = 1.0
        self._lambda_g: float = 50.0
        self._tau_init: float = 10.0
        self._temp_context: float = 0.5
        self._temp_target: float = 1.0
        self._test_samples: int = 30
        self._deterministic_edges: bool = False
        self._reg_rows: str = "consolidated"

    def get_identifier(self) -> str:
        return "train"

    @property
    def method(self):
        """
        Get the training method.
        """
        return self._method

    @method.setter
    def method(self, method: str):
        """
        Set the training method.
        """
        if not isinstance(method, str):
            raise TypeError("Method should be a string.")
        if method not in METHODS:
            raise ValueError(f"Unknown method '{method}'. Choose from {list(METHODS)}.")
        self._method = method

    @property
    def batch_size(self):
        """
        Get the number of stream examples per step.
        """
        return self._batch_size

    @batch_size.setter
    def batch_size(self, batch_size: int):
        if not _is_int(batch_size):
            raise TypeError("Batch size should be an integer.")
        if batch_size < 1:
            raise ValueError("Batch size should be greater than 0.")
        self._batch_size = batch_size

    @property
    def memory_capacity(self):
        """
        Get the number of episodic memory slots.
        """
        return self._memory_capacity

    @memory_capacity.setter
    def memory_capacity(self, memory_capacity: int):
        if not _is_int(memory_capacity):
            raise TypeError("Memory capacity should be an integer.")
        if memory_capacity < 0:
            raise ValueError("Memory capacity should not be negative.")
        self._memory_capacity = memory_capacity

    @property
    def epochs_per_task(self):
        return self._epochs_per_task

    @epochs_per_task.setter
    def epochs_per_task(self, epochs_per_task: int):
        if not _is_int(epochs_per_task):
            raise TypeError("Epochs per task should be an integer.")
        if epochs_per_task < 1:
            raise ValueError("Epochs per task should be greater than 0.")
        self._epochs_per_task = epochs_per_task

    @property
    def optimizer(self):
        """
        Get the optimizer name.
        """
        return self._optimizer

    @optimizer.setter
    def optimizer(self, optimizer: str):
        if not isinstance(optimizer, str):
            raise TypeError("Optimizer should be a string.")
        if optimizer not in OPTIMIZERS:
            raise ValueError(f"Unknown optimizer '{optimizer}'. Choose from {list(OPTIMIZERS)}.")
        self._optimizer = optimizer

    @property
    def learning_rate(self):
        return self._learning_rate

    @learning_rate.setter
    def learning_rate(self, learning_rate: float):
        if not _is_number(learning_rate):
            raise TypeError("Learning rate should be a number.")
        if learning_rate <= 0:
            raise ValueError("Learning rate should be positive.")
        self._learning_rate = float(learning_rate)

    @property
    def beta1(self):
        return self._beta1

    @beta1.setter
    def beta1(self, beta1: float):
        if not _is_number(beta1):
            raise TypeError("beta1 should be a number.")
        if not 0.0 <= beta1 < 1.0:
            raise ValueError("beta1 should be within [0, 1).")
        self._beta1 = float(beta1)

    @property
    def beta2(self):
        return self._beta2

    @beta2.setter
    def beta2(self, beta2: float):
        if not _is_number(beta2):
            raise TypeError("beta2 should be a number.")
        if not 0.0 <= beta2 < 1.0:
            raise ValueError("beta2 should be within [0, 1).")
        self._beta2 = float(beta2)

    @property
    def adam_eps(self):
        return self._adam_eps

    @adam_eps.setter
    def adam_eps(self, adam_eps: float):
        if not _is_number(adam_eps):
            raise TypeError("Adam epsilon should be a number.")
        if adam_eps <= 0:
            raise ValueError("Adam epsilon should be positive.")
        self._adam_eps = float(adam_eps)

    @property
    def lambda_c(self):
        """
        Get the weight of the context cross-entropy.
        """
        return self._lambda_c

    @lambda_c.setter
    def lambda_c(self, lambda_c: float):
        if not _is_number(lambda_c):
            raise TypeError("lambda_c should be a number.")
        if lambda_c < 0:
            raise ValueError("lambda_c should not be negative.")
        self._lambda_c = float(lambda_c)

    @property
    def lambda_t(self):
        """
        Get the weight of the target cross-entropy.
        """
        return self._lambda_t

    @lambda_t.setter
    def lambda_t(self, lambda_t: float):
        if not _is_number(lambda_t):
            raise TypeError("lambda_t should be a number.")
        if lambda_t < 0:
            raise ValueError("lambda_t should not be negative.")
        self._lambda_t = float(lambda_t)

    @property
    def lambda_g(self):
        """
        Get the weight of the graph regularization.
        """
        return self._lambda_g

    @lambda_g.setter
    def lambda_g(self, lambda_g: float):
        if not _is_number(lambda_g):
            raise TypeError("lambda_g should be a number.")
        if lambda_g < 0:
            raise ValueError("lambda_g should not be negative.")
        self._lambda_g = float(lambda_g)

    @property
    def tau_init(self):
        """
        Get the initial kernel bandwidth.
        """
        return self._tau_init

    @tau_init.setter
    def tau_init(self, tau_init: float):
        if not _is_number(tau_init):
            raise TypeError("tau_init should be a number.")
        if tau_init <= 0:
            raise ValueError("tau_init should be positive.")
        self._tau_init = float(tau_init)

    @property
    def temp_context(self):
        """
        Get the Concrete temperature of the context graph.
        """
        return self._temp_context

    @temp_context.setter
    def temp_context(self, temp_context: float):
        if not _is_number(temp_context):
            raise TypeError("Context temperature should be a number.")
        if temp_context <= 0:
            raise ValueError("Context temperature should be positive.")
        self._temp_context = float(temp_context)

    @property
    def temp_target(self):
        """
        Get the Concrete temperature of the context-target graph.
        """
        return self._temp_target

    @temp_target.setter
    def temp_target(self, temp_target: float):
        if not _is_number(temp_target):
            raise TypeError("Target temperature should be a number.")
        if temp_target <= 0:
            raise ValueError("Target temperature should be positive.")
        self._temp_target = float(temp_target)

    @property
    def test_samples(self):
        """
        Get the number of graph samples averaged at test time.
        """
        return self._test_samples

    @test_samples.setter
    def test_samples(self, test_samples: int):
        if not _is_int(test_samples):
            raise TypeError("Test samples should be an integer.")
        if test_samples < 1:
            raise ValueError("Test samples should be greater than 0.")
        self._test_samples = test_samples

    @property
    def deterministic_edges(self):
        """
        Get the flag that replaces sampled graphs by their edge probabilities.
        """
        return self._deterministic_edges

    @deterministic_edges.setter
    def deterministic_edges(self, deterministic_edges: bool):
        if not isinstance(deterministic_edges, bool):
            raise TypeError("Deterministic edges should be a boolean.")
        self._deterministic_edges = deterministic_edges

    @property
    def reg_rows(self):
        """
        Get the selection of regularized graph rows.
        """
        return self._reg_rows

    @reg_rows.setter
    def reg_rows(self, reg_rows: str):
        if not isinstance(reg_rows, str):
            raise TypeError("Regularized rows should be a string.")
        if reg_rows not in REG_ROWS:
            raise ValueError(f"Unknown row selection '{reg_rows}'. Choose from {list(REG_ROWS)}.")
        self._reg_rows = reg_rows

    def loss_weights(self) -> LossWeights:
        return LossWeights(self._lambda_c, self._lambda_t, self._lambda_g)

    def kernel_params(self) -> KernelParams:
        """
        Fresh kernel parameters with a learnable bandwidth at its initial value.
        """
        return KernelParams(self._tau_init, self._temp_context, self._temp_target)


class ConfigManager:
    """
    Overall configuration manager for the program.
    """

    def __init__(self, config_file: str | Path | None = None):
        """
        Initialize configuration sections with default values
        """
        self.general = GeneralConfig()
        self.data = DataConfig()
        self.model = ModelConfig()
        self.train = TrainConfig()

        if config_file:
            self.load_from_file(config_file)

    def check_config(self, verbosity: int = 1) -> None:
        """
        Checks ConfigClass for any incompatibilities that are imaginable
        """
        if (
            self.data.family == "split"
            and self.data.num_tasks * self.data.classes_per_task > self.data.num_classes
        ):
            raise ValueError(
                f"{self.data.num_tasks} tasks with {self.data.classes_per_task} classes "
                + f"each exceed the class budget of {self.data.num_classes}."
            )

        if self.train.memory_capacity < 1 and any(
            m in ("gcl", "er") for m in self.general.methods
        ):
            raise ValueError("Methods 'gcl' and 'er' require a memory capacity of at least 1.")

        if self.data.family == "rotated" and self.data.grid < 2 and verbosity > 0:
            warnings.warn("Rotating a 1x1 grid leaves every task unchanged.")

        num_workers = self.num_workers()
        if self.general.parallel > num_workers and verbosity > -1:
            warnings.warn(
                f"Number of workers requested ({self.general.parallel}) exceeds "
                + f"the available cores or {THREADS_ENV}. "
                + f"Using {num_workers} workers instead."
            )

        if num_workers > 1 and verbosity > 0:
            # raise warning that parallelization will disable verbosity
            warnings.warn(
                "Parallelization will disable verbosity within the individual runs. "
                + "Set '--verbosity 0' or '-P 1' to avoid this warning, or simply ignore it."
            )

    def num_workers(self) -> int:
        """
        Number of worker processes: the configured parallelism, capped by the
        available cores and the RELMEM_THREADS environment variable.
        """
        limit = min(mp.cpu_count(), self.general.parallel)
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError as e:
                raise ValueError(f"{THREADS_ENV} should be an integer, got '{env}'.") from e
            if threads < 1:
                raise ValueError(f"{THREADS_ENV} should be greater than 0.")
            limit = min(limit, threads)
        return limit

    def get_all_identifiers(self):
        """
        Returns the identifiers of all subconfiguration classes, e.g. "general", "train", ...
        """
        identifiers = []
        for attr_name in dir(self):
            attr_value = getattr(self, attr_name)
            # Check if the attribute is an instance of BaseConfig
            if isinstance(attr_value, BaseConfig):
                identifiers.append(attr_value.get_identifier())
        return identifiers

    def load_from_file(self, config_file: str | Path) -> None:
        """
        Load configuration from a TOML file, or from a JSON file if the suffix is `.json`.
        """
        if Path(config_file).suffix.lower() == ".json":
            self.load_from_json(config_file)
        else:
            self.load_from_toml(config_file)

    def load_from_toml(self, config_file: str | Path) -> None:
        """
        Load configuration from TOML file that is structured as follows:
        [general]
        verbosity = 1
        methods = ["gcl", "er"]

        [train]
        memory_capacity = 50
        lambda_g = 50.0

        Arguments:
            config_file (str): Path to the configuration file

        """
        # Load the configuration file
        config_data = toml.load(config_file)
        self.load_from_dict(config_data)

    def load_from_json(self, config_file: str | Path) -> None:
        """
        Load configuration from a JSON file with the same section layout as the TOML file.
        """
        with open(config_file, encoding="utf-8") as f:
            config_data = json.load(f)
        if not isinstance(config_data, dict):
            raise ValueError("The JSON configuration should be an object of sections.")
        self.load_from_dict(config_data)

    def load_from_dict(self, config_dict: dict) -> None:
        """
        Load configuration from a dictionary structured as follows:
        {
            "general": {
                "verbosity": 1,
                "seeds": [0, 1]
            },
            "train": {
                "method": "gcl",
                "lambda_g": 50.0
            }
        }

        Arguments:
            config_dict (dict): Dictionary containing the configuration
        """
        # Check for unknown keys
        all_identifiers = self.get_all_identifiers()
        for key in config_dict:
            if key not in all_identifiers:
                raise KeyError(f"Unknown key in configuration file: {key}")

        for sub_config in all_identifiers:
            if sub_config not in config_dict:
                continue
            section = getattr(self, sub_config)
            for config_key, config_value in config_dict[sub_config].items():
                if not isinstance(getattr(type(section), config_key, None), property):
                    raise KeyError(f"Unknown key in section [{sub_config}]: {config_key}")
                if config_value is not None:
                    setattr(section, config_key, config_value)

    def __str__(self) -> str:
        """
        Automated method to display the current configuration.
        """
        configstr = ""
        for attr_name in dir(self):
            attr_value = getattr(self, attr_name)
            if isinstance(attr_value, BaseConfig):
                configstr += (
                    f"{attr_value.get_identifier().capitalize()} configuration:\n"
                )
                for key, value in attr_value.__dict__.items():
                    configstr += (
                        f"{key[1:]:>30}:   {value}\n"  # Skip the leading underscore
                    )
                configstr += "\n"
        return configstr
