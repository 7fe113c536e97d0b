import json
from pathlib import Path

import pytest

import evoplc as e
from evoplc import cli, experiment
from conftest import front_oracle

SMALL_CONFIG = """\
[plant]
profile = "default-synthetic"

[scenario]
duration = 40.0

[evolution]
population_size = 12
generations = 6
seed = 7
r_min = 4
r_max = 12

[output]
dir = "{out}"
"""


def write_config(tmp_path, name="run.toml", text=None, **fmt):
    path = tmp_path / name
    out = fmt.pop("out", tmp_path / "out")
    path.write_text((text or SMALL_CONFIG).format(out=out, **fmt))
    return path


def test_config_defaults_resolve(tmp_path):
    config = experiment.load_run_config(write_config(tmp_path))
    assert config.evolution.population_size == 12
    assert config.scenario.duration == 40.0
    assert config.bounds.r_max == 12
    # transport target derives from the drain capacity of the episode
    assert config.fitness.p_trans == pytest.approx(0.1 * 40.0 * 0.75)
    assert config.fitness.p_code == float(12 - 7)
    assert config.constraints.no_overflow and config.constraints.no_underflow


def test_config_errors(tmp_path):
    with pytest.raises(e.ConfigError):
        experiment.load_run_config(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("this is not toml [")
    with pytest.raises(e.ConfigError):
        experiment.load_run_config(bad)
    negative = tmp_path / "neg.toml"
    negative.write_text("[evolution]\npopulation_size = -4\n")
    with pytest.raises(e.ConfigError):
        experiment.run(experiment.load_run_config(negative))


def test_config_scenario_file_reference(tmp_path):
    scen = tmp_path / "scenario.toml"
    scen.write_text(
        "duration = 15.0\n[plant]\nq1 = 0.06\n[[inputs]]\nt_start = 0.0\nB1 = true\n")
    cfg = tmp_path / "run.toml"
    cfg.write_text(f'[scenario]\nfile = "scenario.toml"\n[output]\ndir = "{tmp_path}/o"\n')
    config = experiment.load_run_config(cfg)
    assert config.scenario.duration == 15.0
    assert config.scenario.params.q1 == 0.06
    conflicted = tmp_path / "conflict.toml"
    conflicted.write_text('[plant]\nq1 = 0.2\n[scenario]\nfile = "scenario.toml"\n')
    with pytest.raises(e.ConfigError):
        experiment.load_run_config(conflicted)


def test_run_writes_artifact_set(tmp_path):
    config = experiment.load_run_config(write_config(tmp_path))
    report = experiment.run(config)
    out = Path(config.out_dir)
    for name in ("history.csv", "objectives.csv", "front.json", "report.json",
                 "program.st", "program.il", "summary.txt"):
        assert (out / name).exists(), name
    assert not (out / "FAILED").exists()
    history = experiment.read_history_csv(out / "history.csv")
    assert [h["generation"] for h in history] == list(range(7))
    rows = experiment.read_objectives_csv(out / "objectives.csv")
    assert len(rows) == 12
    front = experiment.load_front_json(out / "front.json")
    vectors = [(m["objectives"]["f1"], m["objectives"]["f2"], m["objectives"]["f3"])
               for m in front["members"]]
    assert sorted(front_oracle(vectors)) == list(range(len(vectors)))
    for m in front["members"]:
        rebuilt = e.individual_from_json(m["genome"])
        assert e.validate(rebuilt) == []
    parsed = e.parse_structured_text((out / "program.st").read_text())
    assert parsed
    assert report.best_fitness is None or 0.0 < report.best_fitness <= 3.0
    assert sorted(report.files) == report.files


def test_run_zero_generations(tmp_path):
    text = SMALL_CONFIG.replace("generations = 6", "generations = 0")
    config = experiment.load_run_config(write_config(tmp_path, text=text))
    report = experiment.run(config)
    history = experiment.read_history_csv(Path(config.out_dir) / "history.csv")
    assert len(history) == 1
    assert report.generations == 0


def test_run_progressive_exports_front_members(tmp_path):
    text = SMALL_CONFIG.replace('seed = 7', 'seed = 7\npa_mode = "progressive"')
    config = experiment.load_run_config(write_config(tmp_path, text=text))
    report = experiment.run(config)
    out = Path(config.out_dir)
    members = experiment.load_front_json(out / "front.json")["members"]
    for n in range(len(members)):
        assert (out / "front" / f"member_{n:03d}.st").exists()
    assert report.front_size == len(members)


def test_run_byte_identical_artifacts(tmp_path):
    config_a = experiment.load_run_config(
        write_config(tmp_path, name="a.toml", out=tmp_path / "out_a"))
    config_b = experiment.load_run_config(
        write_config(tmp_path, name="b.toml", out=tmp_path / "out_b"))
    report_a = experiment.run(config_a)
    report_b = experiment.run(config_b)
    assert report_a.files == report_b.files
    for name in report_a.files:
        if name == "report.json":
            continue
        a = (Path(config_a.out_dir) / name).read_bytes()
        b = (Path(config_b.out_dir) / name).read_bytes()
        assert a == b, name


def test_failed_marker_on_evolution_error(tmp_path, monkeypatch):
    config = experiment.load_run_config(write_config(tmp_path))

    def boom(*args, **kwargs):
        raise RuntimeError("engine exploded")

    monkeypatch.setattr(experiment, "evolve", boom)
    with pytest.raises(RuntimeError):
        experiment.run(config)
    marker = Path(config.out_dir) / "FAILED"
    assert marker.exists()
    assert "engine exploded" in marker.read_text()


def test_compare_requires_shared_scenario(tmp_path):
    prior = experiment.load_run_config(write_config(tmp_path, name="p.toml"))
    other_text = SMALL_CONFIG.replace("duration = 40.0", "duration = 50.0")
    prog = experiment.load_run_config(
        write_config(tmp_path, name="g.toml", text=other_text))
    with pytest.raises(e.ConfigError):
        experiment.compare(prior, prog, out_dir=tmp_path / "cmp")


def test_compare_merges_and_scores(tmp_path):
    prior = experiment.load_run_config(write_config(tmp_path, name="p.toml",
                                                    out=tmp_path / "po"))
    prog = experiment.load_run_config(write_config(tmp_path, name="g.toml",
                                                   out=tmp_path / "go"))
    report = experiment.compare(prior, prog, out_dir=tmp_path / "cmp")
    assert 0.0 <= report.coverage_prior_dominated <= 1.0
    assert 0.0 <= report.coverage_progressive_dominated <= 1.0
    merged = experiment.read_objectives_csv(tmp_path / "cmp" / "objective_space.csv")
    assert len(merged) == report.merged_rows
    assert report.merged_rows == report.prior.front_size + report.progressive.front_size
    modes = {row["mode"] for row in merged}
    assert modes <= {"prior", "progressive"}
    assert (tmp_path / "cmp" / "comparison.json").exists()


def test_count_genome_space_matches_enumeration():
    one_row = e.GenomeBounds(r_min=1, r_max=1, operators="paper")
    assert e.count_genome_space(one_row) == 96
    assert sum(1 for _ in e.iter_genome_space(one_row)) == 96
    two_rows = e.GenomeBounds(r_min=1, r_max=2, operators="paper")
    assert e.count_genome_space(two_rows) == sum(1 for _ in e.iter_genome_space(two_rows))
    full_ops = e.GenomeBounds(r_min=1, r_max=2, operators="full")
    assert e.count_genome_space(full_ops) == sum(1 for _ in e.iter_genome_space(full_ops))


def test_enumeration_yields_valid_unique_individuals():
    bounds = e.GenomeBounds(r_min=1, r_max=2, operators="paper")
    seen = set()
    for ind in e.iter_genome_space(bounds):
        assert e.validate(ind, bounds) == []
        assert ind.rows not in seen
        seen.add(ind.rows)


def test_oracle_guard_trips_before_enumeration():
    scenario = e.default_scenario()
    with pytest.raises(e.SpaceTooLarge):
        e.enumerate_oracle(e.GenomeBounds(), scenario)


def test_oracle_front_is_nondominated():
    scenario = e.default_scenario(duration=20.0)
    bounds = e.GenomeBounds(r_min=1, r_max=1, operators="paper")
    evaluated, front = e.enumerate_oracle(bounds, scenario)
    assert len(evaluated) == 96
    vectors = [m.objectives.as_tuple() for m in front]
    assert sorted(front_oracle(vectors)) == list(range(len(vectors)))
    assert all(m.feasible for m in front)


def test_parallel_evaluator_matches_serial(default_setup):
    scenario, bounds, constraints, _ = default_setup
    inner = e.PlantEvaluator(scenario, bounds, constraints)
    parallel = experiment.ParallelEvaluator(
        e.PlantEvaluator(scenario, bounds, constraints), jobs=2)
    individuals = [e.random_individual(s, bounds) for s in range(8)]
    try:
        assert parallel.evaluate_many(individuals) == inner.evaluate_many(individuals)
    finally:
        parallel.close()


def test_decode_genome_file(tmp_path, reference):
    genome = tmp_path / "genome.json"
    genome.write_text(json.dumps(e.rows_to_json(reference)))
    names = experiment.decode_genome_file(genome, tmp_path / "decoded")
    assert names == ["program.st", "program.il", "summary.txt"]
    text = (tmp_path / "decoded" / "program.st").read_text()
    assert "P1 := NOT S3 AND B1;" in text
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"line": 0, "output": None, "input": "S1",
                                "op": "AND", "neg": False, "mode": "A"}]))
    with pytest.raises(e.ConfigError):
        experiment.decode_genome_file(bad, tmp_path / "d2")


def test_cli_run_and_exit_codes(tmp_path, capsys):
    config = write_config(tmp_path)
    assert cli.main(["run", str(config)]) == 0
    out = capsys.readouterr().out
    assert "run complete" in out

    assert cli.main(["run", str(tmp_path / "nope.toml")]) == cli.EXIT_CONFIG

    oracle_cfg = write_config(tmp_path, name="oracle.toml")
    # default bounds are far beyond the guard
    big = (tmp_path / "big.toml")
    big.write_text(f'[output]\ndir = "{tmp_path}/big"\n')
    assert cli.main(["oracle", str(big)]) == cli.EXIT_CONFIG


def test_cli_decode(tmp_path, reference, capsys):
    genome = tmp_path / "genome.json"
    genome.write_text(json.dumps(e.rows_to_json(reference)))
    assert cli.main(["decode", str(genome), "--out-dir", str(tmp_path / "dd")]) == 0
    assert (tmp_path / "dd" / "program.st").exists()


def test_cli_overrides(tmp_path):
    config = write_config(tmp_path)
    out2 = tmp_path / "other"
    assert cli.main(["run", str(config), "--seed", "99", "--generations", "2",
                     "--out-dir", str(out2)]) == 0
    report = json.loads((out2 / "report.json").read_text())
    assert report["seed"] == 99
    assert report["generations"] == 2


def test_cli_oracle_subcommand(tmp_path, capsys):
    text = SMALL_CONFIG.replace("r_min = 4", "r_min = 1").replace(
        "r_max = 12", 'r_max = 1\noperators = "paper"')
    config = write_config(tmp_path, text=text)
    assert cli.main(["oracle", str(config)]) == 0
    out = Path(experiment.load_run_config(config).out_dir)
    assert (out / "oracle_objectives.csv").exists()
    assert (out / "oracle_front.json").exists()


def test_cli_compare_subcommand(tmp_path, capsys):
    prior = write_config(tmp_path, name="p.toml", out=tmp_path / "po")
    prog = write_config(tmp_path, name="g.toml", out=tmp_path / "go")
    code = cli.main(["compare", str(prior), str(prog),
                     "--out-dir", str(tmp_path / "cmp"), "--seed", "5"])
    assert code == 0
    assert (tmp_path / "cmp" / "objective_space.csv").exists()


def test_cli_evolution_error_exit_code(tmp_path, monkeypatch):
    config = write_config(tmp_path)

    def boom(*args, **kwargs):
        raise RuntimeError("mid-run failure")

    monkeypatch.setattr(experiment, "evolve", boom)
    assert cli.main(["run", str(config)]) == cli.EXIT_EVOLUTION


def test_cli_io_error_exit_code(tmp_path, monkeypatch):
    config = write_config(tmp_path)

    def deny(*args, **kwargs):
        raise experiment.IoError("disk is lava")

    monkeypatch.setattr(experiment, "run", deny)
    assert cli.main(["run", str(config)]) == cli.EXIT_IO


def test_env_log_level(tmp_path, monkeypatch, reference):
    monkeypatch.setenv("EVOPLC_LOG", "DEBUG")
    genome = tmp_path / "genome.json"
    genome.write_text(json.dumps(e.rows_to_json(reference)))
    assert cli.main(["decode", str(genome), "--out-dir", str(tmp_path / "dd")]) == 0
