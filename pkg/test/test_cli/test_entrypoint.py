"""
Test program call from command line.
"""

import pytest

from relmem.cli import console_entry_point  # type: ignore
from relmem.data import load_dataset  # type: ignore
from relmem.evaluation import read_csv  # type: ignore

TINY_CONFIG = """
[general]
verbosity = -1
parallel = 1
methods = ["gcl", "er"]
seeds = [0]

[data]
family = "split"
num_tasks = 2
num_classes = 4
grid = 2
train_per_class = 4
test_per_class = 2

[model]
trunk_widths = [6]
d1 = 4
d_img = 4
d_lab = 2

[train]
memory_capacity = 6
batch_size = 4
test_samples = 2
"""


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path))
    (tmp_path / "relmem.toml").write_text(TINY_CONFIG, encoding="utf-8")
    return tmp_path


def test_run_and_summarize(workdir):
    assert console_entry_point(["run", "--out", "bench"]) == 0
    rows = read_csv(workdir / "bench" / "results.csv")
    assert [row["method"] for row in rows] == ["gcl", "er"]
    (workdir / "bench" / "summary.csv").unlink()
    assert console_entry_point(["summarize", "bench"]) == 0
    assert (workdir / "bench" / "summary.csv").is_file()


def test_run_is_reproducible(workdir):
    assert console_entry_point(["run", "--out", "a", "--method", "gcl"]) == 0
    assert console_entry_point(["run", "--out", "b", "--method", "gcl"]) == 0
    for name in ("results.csv", "gcl_seed0_R.csv", "gcl_seed0_steps.csv"):
        assert (workdir / "a" / name).read_text() == (workdir / "b" / name).read_text()


def test_explicit_config_file(workdir):
    config = workdir / "other.toml"
    config.write_text(TINY_CONFIG.replace('methods = ["gcl", "er"]', 'methods = ["finetune"]'))
    assert console_entry_point(["run", "-c", str(config), "--out", "ft"]) == 0
    assert [row["method"] for row in read_csv(workdir / "ft" / "results.csv")] == ["finetune"]


def test_gen_data(workdir):
    assert console_entry_point(["gen-data", "--out", "stream.bin", "--num-tasks", "1"]) == 0
    stream = load_dataset(workdir / "stream.bin")
    assert len(stream) == 1
    assert stream.num_classes == 4
    assert stream.input_dim == 4


def test_graph_dump(workdir, capsys):
    assert console_entry_point(["run", "--out", "bench", "--method", "gcl"]) == 0
    snapshot = workdir / "bench" / "gcl_seed0_memory.bin"
    assert console_entry_point(["graph-dump", str(snapshot), "--verbosity", "0"]) == 0
    graph = (workdir / "bench" / "gcl_seed0_memory.csv").read_text().splitlines()
    assert len(graph) == 7
    assert graph[0].startswith("slot0_c")
    assert "components" in capsys.readouterr().out


def test_grad_check(workdir, capsys):
    assert console_entry_point(["grad-check"]) == 0
    assert "Max relative gradient error" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "-c", "missing.toml"],
        ["run", "--memory", "-1"],
        ["run", "--method", "gcl,unknown"],
        ["run", "--num-tasks", "3"],
        ["summarize", "empty"],
        ["graph-dump", "missing.bin"],
    ],
)
def test_invalid_input_exits_with_2(workdir, argv):
    (workdir / "empty").mkdir()
    assert console_entry_point(argv) == 2


def test_misspelled_key_exits_with_2(workdir, capsys):
    config = workdir / "typo.toml"
    config.write_text(TINY_CONFIG.replace("memory_capacity = 6", "memory_capacty = 6"))
    assert console_entry_point(["run", "-c", str(config), "--out", "typo"]) == 2
    assert "memory_capacty" in capsys.readouterr().err
    assert not (workdir / "typo").exists()


def test_default_configuration_warns(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path))
    with pytest.warns(UserWarning, match="No configuration file"):
        assert console_entry_point(["grad-check", "--verbosity", "-1"]) == 0


def test_runtime_failure_exits_with_1(workdir, monkeypatch):
    from relmem.trainer import TrainingAbortedError  # type: ignore

    def aborting_run(*args, **kwargs):
        raise TrainingAbortedError("Run aborted.")

    monkeypatch.setattr("relmem.benchmark.main.run_stream", aborting_run)
    with pytest.warns(UserWarning):
        assert console_entry_point(["run", "--out", "bench"]) == 1
