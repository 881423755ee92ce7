"""
This module contains the Command-Line Interface.
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence

from .. import __version__
from ..prog.config import FAMILIES, METHODS, OPTIMIZERS

COMMANDS = ("run", "gen-data", "graph-dump", "grad-check", "summarize")


def _shared_arguments() -> argparse.ArgumentParser:
    """
    Configuration options accepted by every subcommand.
    """
    parser = argparse.ArgumentParser(add_help=False)

    ### General arguments ###
    parser.add_argument(
        "-c",
        "--config",
        type=str,
        help="Configuration file (TOML or JSON).",
        required=False,
    )
    parser.add_argument(
        "--print-config",
        action="store_true",
        default=False,
        required=False,
        help="Print the configuration and exit.",
    )
    parser.add_argument(
        "--verbosity",
        type=int,
        required=False,
        choices=[-1, 0, 1, 2, 3],
        help="Verbosity level "
        + "(-1 (silent), "
        + "0 (very basic), "
        + "1 (default), "
        + "2 (per-task accuracies), or "
        + "3 (per-step losses)).",
    )
    parser.add_argument(
        "-P",
        "--parallel",
        type=int,
        required=False,
        help="Number of parallel runs.",
    )
    parser.add_argument(
        "--method",
        type=str,
        required=False,
        help=f"Comma-separated methods to run ({', '.join(METHODS)}).",
    )
    parser.add_argument(
        "--seed",
        type=int,
        required=False,
        help="Run seed (replaces the configured seed list).",
    )

    ### Data arguments ###
    parser.add_argument(
        "--family",
        type=str,
        required=False,
        choices=list(FAMILIES),
        help="Task-stream family.",
    )
    parser.add_argument(
        "--num-tasks",
        type=int,
        required=False,
        help="Number of tasks in the stream.",
    )

    ### Training arguments ###
    parser.add_argument(
        "--memory",
        type=int,
        required=False,
        help="Episodic memory capacity.",
    )
    parser.add_argument(
        "--lambda-g",
        type=float,
        required=False,
        help="Weight of the graph regularization.",
    )
    parser.add_argument(
        "--test-samples",
        type=int,
        required=False,
        help="Number of sampled graphs averaged at evaluation.",
    )
    parser.add_argument(
        "--optimizer",
        type=str,
        required=False,
        choices=list(OPTIMIZERS),
        help="Optimizer.",
    )
    parser.add_argument(
        "--learning-rate",
        type=float,
        required=False,
        help="Learning rate.",
    )
    parser.add_argument(
        "--deterministic-edges",
        action="store_true",
        default=None,
        required=False,
        help="Use edge probabilities instead of sampled edges.",
    )
    return parser


def cli_parser(argv: Sequence[str] | None = None) -> dict:
    """
    Parse command line arguments.

    :return: Nested dictionary with the configuration sections `general`,
        `data` and `train` and the subcommand options under `command`.
    """
    shared = _shared_arguments()
    parser = argparse.ArgumentParser(prog="relmem")
    parser.add_argument(
        "-v", "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser(
        "run", parents=[shared], help="Run all configured methods and seeds."
    )
    run.add_argument(
        "--out", dest="out_dir", type=str, required=False, help="Output directory."
    )

    gen_data = subparsers.add_parser(
        "gen-data", parents=[shared], help="Write the task stream of the first seed."
    )
    gen_data.add_argument(
        "--out", dest="out_file", type=str, required=True, help="Dataset container file."
    )

    graph_dump = subparsers.add_parser(
        "graph-dump", parents=[shared], help="Convert a memory snapshot to a graph CSV."
    )
    graph_dump.add_argument("snapshot", type=str, help="Memory snapshot file.")
    graph_dump.add_argument(
        "--out",
        dest="out_file",
        type=str,
        required=False,
        help="Graph CSV file (default: snapshot path with suffix '.csv').",
    )
    graph_dump.add_argument(
        "--threshold",
        type=float,
        default=0.5,
        help="Minimum edge probability counted in the summary.",
    )

    grad_check = subparsers.add_parser(
        "grad-check", parents=[shared], help="Finite-difference check of the objective."
    )
    grad_check.add_argument(
        "--eps", type=float, default=1e-5, help="Finite-difference step."
    )

    summarize = subparsers.add_parser(
        "summarize", parents=[shared], help="Aggregate per-run results of a directory."
    )
    summarize.add_argument(
        "results_dir",
        type=str,
        nargs="?",
        default=None,
        help="Results directory (default: configured output directory).",
    )

    args = parser.parse_args(argv)
    args_dict = vars(args)

    ### TRANSLATE ARGUMENTS TO DICTIONARY ###
    rev_args_dict: dict[str, dict] = {}
    rev_args_dict["general"] = {
        "config": args_dict["config"],
        "verbosity": args_dict["verbosity"],
        "parallel": args_dict["parallel"],
        "print_config": args_dict["print_config"] or None,
        "methods": args_dict["method"],
        "seeds": args_dict["seed"],
        "out_dir": args_dict.get("out_dir"),
    }
    rev_args_dict["data"] = {
        "family": args_dict["family"],
        "num_tasks": args_dict["num_tasks"],
    }
    rev_args_dict["train"] = {
        "memory_capacity": args_dict["memory"],
        "lambda_g": args_dict["lambda_g"],
        "test_samples": args_dict["test_samples"],
        "optimizer": args_dict["optimizer"],
        "learning_rate": args_dict["learning_rate"],
        "deterministic_edges": args_dict["deterministic_edges"],
    }
    rev_args_dict["command"] = {
        "name": args_dict["command"],
        "out_file": args_dict.get("out_file"),
        "snapshot": args_dict.get("snapshot"),
        "threshold": args_dict.get("threshold"),
        "eps": args_dict.get("eps"),
        "results_dir": args_dict.get("results_dir"),
    }
    return rev_args_dict
