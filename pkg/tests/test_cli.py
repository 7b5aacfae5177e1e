import json
import subprocess
import sys

import pytest

from nurse_ga.cli import EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, main

from .conftest import FIXTURES

pytestmark = pytest.mark.filterwarnings("ignore:no patterns file")


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "nurse_ga", *map(str, args)], capture_output=True, text=True, cwd=cwd)


def test_solve_is_deterministic(tmp_path):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.txt"
        rc = main(["solve", "--archetype", "normal", "--seed", "543211", "--population", "60",
                   "--max-generations", "10", "--output", str(out)])
        assert rc in (EXIT_OK, EXIT_INFEASIBLE)
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] and outputs[0]


def test_solve_infeasible_exit_code(tmp_path):
    rc = main(["solve", "--archetype", "restrictive", "--seed", "1", "--population", "10",
               "--max-generations", "1", "--demand-weight", "0", "--output", str(tmp_path / "r.txt")])
    assert rc == EXIT_INFEASIBLE


def test_missing_seed_is_usage_error():
    assert main(["solve", "--archetype", "normal"]) == EXIT_USAGE


def test_unknown_flag_is_usage_error():
    result = run_cli("solve", "--archetype", "normal", "--seed", "1", "--bogus")
    assert result.returncode == EXIT_USAGE


def test_bad_data_is_error(tmp_path):
    (tmp_path / "demand.txt").write_text("not a table\n")
    assert main(["solve", "--seed", "1", "--instance-dir", str(tmp_path)]) == EXIT_ERROR


def test_generate_then_export_lp(tmp_path):
    assert main(["generate", "--archetype", "fluctuating", "--seed", "4", "--output-dir", str(tmp_path / "inst")]) == EXIT_OK
    lp = tmp_path / "model.lp"
    assert main(["export-lp", "--instance-dir", str(tmp_path / "inst"), "--output", str(lp)]) == EXIT_OK
    text = lp.read_text()
    assert text.startswith("minimize") and text.rstrip().endswith("end")


def test_oracle_on_lp_toy(tmp_path):
    out = tmp_path / "opt.txt"
    assert main(["oracle", "--instance-dir", str(FIXTURES / "lp_toy"), "--output", str(out)]) == EXIT_OK
    assert "enumerated" in out.read_text()


def test_oracle_limit_error():
    assert main(["oracle", "--archetype", "normal", "--seed", "1", "--limit", "1000"]) == EXIT_ERROR


def _grid(tmp_path, **extra):
    grid = {
        "repetitions": 2,
        "instances": [{"name": "norm", "archetype": "normal", "seed": 2}],
        "configs": [
            {"name": "base", "population_size": 30, "max_generations": 3},
            {"name": "seg", "population_size": 30, "max_generations": 3, "extensions": {"segmented_crossover": True}},
        ],
    }
    grid.update(extra)
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(grid))
    return path


def test_experiment_csv_reproducible(tmp_path):
    grid = _grid(tmp_path)
    texts = []
    for name in ("a.csv", "b.csv"):
        result = run_cli("experiment", grid, "--seed", "543210", "--no-timing", "--output", tmp_path / name)
        assert result.returncode == EXIT_OK, result.stderr
        texts.append((tmp_path / name).read_bytes())
    assert texts[0] == texts[1]
    assert texts[0].count(b"aggregate") == 2


@pytest.mark.parametrize("override", [{"configs": []}, {"instances": []}])
def test_empty_grid_is_usage_error(tmp_path, override):
    assert main(["experiment", str(_grid(tmp_path, **override)), "--seed", "1"]) == EXIT_USAGE


def test_unknown_grid_key_is_usage_error(tmp_path):
    grid = _grid(tmp_path, configs=[{"name": "x", "popsize": 3}])
    assert main(["experiment", str(grid), "--seed", "1"]) == EXIT_USAGE
