"""
Main driver of relmem: runs every (method, seed) combination of a configuration.
"""

from __future__ import annotations

import copy
import multiprocessing as mp
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..data import TaskStream, generate_stream
from ..evaluation import results_row, write_result_matrix_csv, write_results_csv
from ..memory import save_memory
from ..prog import ConfigManager, Stream, stream_seed
from ..relgraph import write_graph_csv
from ..trainer import TrainingAbortedError, run_stream, write_step_log_csv
from .summary import summarize

RESULTS_FILE = "results.csv"


@dataclass
class RunRecord:
    """
    Outcome of one (method, seed) run.
    """

    method: str
    seed: int
    row: list[str] | None = None
    error: str | None = None


def build_stream(config: ConfigManager, seed: int) -> TaskStream:
    """
    Task stream of the configured family for one run seed.
    """
    return generate_stream(
        config.data.family,
        config.data.blob_spec(),
        config.data.num_tasks,
        stream_seed(seed, Stream.DATA),
        classes_per_task=config.data.classes_per_task,
        max_degrees=config.data.max_degrees,
        batch_size=config.train.batch_size,
    )


def run_prefix(out_dir: Path, method: str, seed: int) -> Path:
    return out_dir / f"{method}_seed{seed}"


def benchmark(config: ConfigManager) -> tuple[list[RunRecord] | None, int]:
    """
    Run all configured methods and seeds and write the result files.

    :return: The run records (None if only the configuration was printed)
        and an exit code, 1 if any run failed.
    """

    #  ____                  _
    # | __ )  ___ _ __   ___| |__
    # |  _ \ / _ \ '_ \ / __| '_ \
    # | |_) |  __/ | | | (__| | | |
    # |____/ \___|_| |_|\___|_| |_|

    if config.general.verbosity > 0:
        print(header(str(__version__)))

    if config.general.print_config:
        print(config)
        return None, 0

    if config.general.verbosity > 0:
        print(config)

    config.check_config(verbosity=config.general.verbosity)

    num_workers = config.num_workers()
    if config.general.verbosity > 0:
        print(f"Running with {num_workers} worker(s).")

    out_dir = config.general.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    jobs = [(method, seed) for method in config.general.methods for seed in config.general.seeds]
    backup_verbosity: int | None = None
    if num_workers > 1 and config.general.verbosity > 0:
        backup_verbosity = config.general.verbosity  # Save verbosity level for later
        config.general.verbosity = 0  # Disable verbosity if parallel

    if config.general.verbosity == 0:
        print("Runs... ", end="", flush=True)
    if num_workers > 1:
        with mp.Pool(processes=num_workers) as pool:
            records = pool.starmap(single_run, [(config, method, seed) for method, seed in jobs])
    else:
        records = [single_run(config, method, seed) for method, seed in jobs]
    if config.general.verbosity == 0:
        print("")

    # Restore verbosity level if it was changed
    if backup_verbosity is not None:
        config.general.verbosity = backup_verbosity

    exitcode = 0
    for record in records:
        if record.error is not None:
            warnings.warn(f"Run '{record.method}' with seed {record.seed} failed: {record.error}")
            exitcode = 1

    finished = [record for record in records if record.row is not None]
    if finished:
        write_results_csv(out_dir / RESULTS_FILE, [record.row for record in finished])
        run_files = [
            f"{run_prefix(out_dir, record.method, record.seed)}_results.csv" for record in finished
        ]
        summary_file = summarize(out_dir, run_files)
        if config.general.verbosity > 0:
            print(f"Written '{out_dir / RESULTS_FILE}' and '{summary_file}'.")
    return records, exitcode


def single_run(config: ConfigManager, method: str, seed: int) -> RunRecord:
    """
    Train and evaluate one method on the stream of one seed and write its artifacts.
    """
    verbosity = config.general.verbosity
    if verbosity > 0:
        print(f"\n{'=' * 80}")
        print(f"{'=' * 25} Method {method:<8} | seed {seed:<6} {'=' * 26}")
        print(f"{'=' * 80}")

    out_dir = config.general.out_dir
    train_config = copy.deepcopy(config.train)
    train_config.method = method
    stream = build_stream(config, seed)
    arch = config.model.arch_config(stream.input_dim, stream.num_classes)
    try:
        output = run_stream(
            stream, train_config, seed=seed, arch=arch, dump_dir=out_dir, verbosity=verbosity
        )
    except TrainingAbortedError as e:
        return RunRecord(method, seed, error=str(e))

    prefix = run_prefix(out_dir, method, seed)
    row = results_row(method, seed, output.results)
    write_results_csv(f"{prefix}_results.csv", [row])
    write_result_matrix_csv(f"{prefix}_R.csv", output.results)
    write_step_log_csv(f"{prefix}_steps.csv", output.logs)
    if method == "gcl":
        write_graph_csv(
            f"{prefix}_graph.csv",
            np.asarray(output.memory.stored_graph),
            output.memory.labels.tolist(),
        )
        save_memory(f"{prefix}_memory.bin", output.memory)

    if verbosity == 0:
        print(".", end="", flush=True)
    elif verbosity > 0:
        print(f"ACC {row[3]} | FGT {row[4]} | steps {len(output.logs)}")
    return RunRecord(method, seed, row=row)


def header(version: str) -> str:
    """
    This function prints the header of the program.
    """
    headerstr = (
        # pylint: disable=C0301
        "╔══════════════════════════════════════════════════════════════════════╗\n"
        "║                                                                      ║\n"
        "║        ██████╗ ███████╗██╗     ███╗   ███╗███████╗███╗   ███╗        ║\n"
        "║        ██╔══██╗██╔════╝██║     ████╗ ████║██╔════╝████╗ ████║        ║\n"
        "║        ██████╔╝█████╗  ██║     ██╔████╔██║█████╗  ██╔████╔██║        ║\n"
        "║        ██╔══██╗██╔══╝  ██║     ██║╚██╔╝██║██╔══╝  ██║╚██╔╝██║        ║\n"
        "║        ██║  ██║███████╗███████╗██║ ╚═╝ ██║███████╗██║ ╚═╝ ██║        ║\n"
        "║        ╚═╝  ╚═╝╚══════╝╚══════╝╚═╝     ╚═╝╚══════╝╚═╝     ╚═╝        ║\n"
        "║                                                                      ║\n"
        f"║                            relmem v{version[:5]:<5}                             ║\n"
        "║          Continual Learning with Random Graphs over Memory           ║\n"
        "║                                                                      ║\n"
        "╚══════════════════════════════════════════════════════════════════════╝"
    )
    return headerstr
