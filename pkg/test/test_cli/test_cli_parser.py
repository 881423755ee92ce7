"""
Test the translation of command line arguments into configuration sections.
"""

import pytest

from relmem.cli import cli_parser  # type: ignore


def test_run_arguments():
    args = cli_parser(
        [
            "run",
            "--method",
            "gcl,er",
            "--seed",
            "3",
            "--memory",
            "20",
            "--lambda-g",
            "5",
            "--deterministic-edges",
            "--out",
            "bench",
            "-P",
            "2",
        ]
    )
    assert args["general"]["methods"] == "gcl,er"
    assert args["general"]["seeds"] == 3
    assert args["general"]["parallel"] == 2
    assert args["general"]["out_dir"] == "bench"
    assert args["general"]["print_config"] is None
    assert args["train"]["memory_capacity"] == 20
    assert args["train"]["lambda_g"] == 5.0
    assert args["train"]["deterministic_edges"] is True
    assert args["command"]["name"] == "run"


def test_unset_options_are_none():
    args = cli_parser(["grad-check"])
    assert all(value is None for value in args["data"].values())
    assert all(value is None for value in args["train"].values())
    assert args["command"]["eps"] == 1e-5
    assert args["general"]["out_dir"] is None


def test_graph_dump_arguments():
    args = cli_parser(["graph-dump", "mem.bin", "--threshold", "0.3", "--verbosity", "0"])
    assert args["command"]["snapshot"] == "mem.bin"
    assert args["command"]["threshold"] == 0.3
    assert args["command"]["out_file"] is None
    assert args["general"]["verbosity"] == 0


def test_summarize_directory_is_optional():
    assert cli_parser(["summarize"])["command"]["results_dir"] is None
    assert cli_parser(["summarize", "out"])["command"]["results_dir"] == "out"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["train"],
        ["gen-data"],
        ["run", "--family", "shuffled"],
        ["run", "--verbosity", "5"],
    ],
)
def test_invalid_arguments(argv):
    with pytest.raises(SystemExit) as excinfo:
        cli_parser(argv)
    assert excinfo.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli_parser(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.startswith("relmem ")
