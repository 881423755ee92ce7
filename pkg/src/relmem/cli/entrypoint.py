"""
Entrypoint for command line interface.
"""

from __future__ import annotations

import sys
import warnings
from collections.abc import Sequence
from pathlib import Path

from ..benchmark import (
    GRAD_CHECK_TOLERANCE,
    benchmark,
    build_stream,
    gcl_grad_check,
    summarize,
)
from ..data import save_dataset
from ..memory import load_memory
from ..prog import ConfigManager
from ..relgraph import graph_summary, write_graph_csv
from .cli_parser import cli_parser as cl

CONFIG_ERRORS = (TypeError, ValueError, KeyError, FileNotFoundError)


def console_entry_point(argv: Sequence[str] | None = None) -> int:
    """
    Entrypoint for command line interface.

    :return: 0 on success, 1 if a run failed at runtime, 2 for invalid
        configuration or input files.
    """
    # Step 1: Parse CLI arguments
    args = cl(argv)
    command = args.pop("command")

    try:
        # Step 2: Find the configuration file (CLI provided or default search)
        config_file = find_config_file(args["general"].pop("config"))

        # Step 3: Load the configuration
        if config_file:
            config = ConfigManager(config_file)
        else:
            config = ConfigManager()

        # Step 4: Merge with CLI arguments, giving precedence to CLI
        config.load_from_dict(args)
    except CONFIG_ERRORS as e:
        print(f"Invalid configuration: {e}", file=sys.stderr)
        return 2
    if config.general.verbosity > 0 and config_file:
        print(f"Reading configuration from file: '{config_file}'")

    try:
        return run_command(command, config)
    except CONFIG_ERRORS as e:
        print(f"Invalid input: {e}", file=sys.stderr)
        return 2
    except (RuntimeError, FloatingPointError) as e:
        print(f"\nRun failed: {e}", file=sys.stderr)
        return 1


def run_command(command: dict, config: ConfigManager) -> int:
    """
    Execute one subcommand with a loaded configuration.
    """
    name = command["name"]
    verbosity = config.general.verbosity

    if name == "run":
        records, exitcode = benchmark(config)
        if records and exitcode != 0:
            if any(record.row is not None for record in records):
                warnings.warn("Benchmark completed with errors for parts of the runs.")
            else:
                warnings.warn("CAUTION: All runs failed. No result tables written.")
        return exitcode

    if name == "gen-data":
        seed = config.general.seeds[0]
        path = save_dataset(build_stream(config, seed), command["out_file"])
        if verbosity >= 0:
            print(f"Written task stream of seed {seed} to '{path}'.")
        return 0

    if name == "graph-dump":
        snapshot = Path(command["snapshot"])
        out_file = command["out_file"] or snapshot.with_suffix(".csv")
        mem = load_memory(snapshot)
        graph = mem.stored_graph
        labels = mem.labels.tolist()
        path = write_graph_csv(out_file, graph, labels)
        if verbosity >= 0:
            print(f"Written context graph of {mem.size} slots to '{path}'.")
            summary = graph_summary(graph, labels, threshold=command["threshold"])
            for key, value in summary.items():
                print(f"{key:<20} {value}")
        return 0

    if name == "grad-check":
        error = gcl_grad_check(
            seed=config.general.seeds[0],
            eps=command["eps"],
            deterministic=config.train.deterministic_edges,
        )
        print(f"Max relative gradient error: {error:.3e}")
        if error > GRAD_CHECK_TOLERANCE:
            print(
                f"Gradient check failed (tolerance {GRAD_CHECK_TOLERANCE:.0e}).",
                file=sys.stderr,
            )
            return 1
        return 0

    if name == "summarize":
        results_dir = command["results_dir"] or config.general.out_dir
        path = summarize(results_dir)
        if verbosity >= 0:
            print(f"Written summary to '{path}'.")
        return 0

    raise ValueError(f"Unknown command '{name}'.")


def find_config_file(cli_config_path: str | Path | None = None) -> Path | None:
    """
    Finds the configuration file. If a path is provided via CLI, use it.
    Otherwise, search in predefined locations.
    """
    # CLI provided config file
    if cli_config_path:
        config_path = Path(cli_config_path).resolve()
        if config_path.is_file():
            return config_path
        raise FileNotFoundError(f"Configuration file not found at {cli_config_path}")

    # Search paths
    search_paths = [
        Path.cwd() / "relmem.toml",  # Current directory
        Path.home() / "relmem.toml",  # $USER/relmem.toml
    ]

    # Find the config file
    for path in search_paths:
        if path.is_file():
            return path

    # If no config file is found, raise a warning
    warnings.warn("No configuration file found. Using default configuration.")
    return None
