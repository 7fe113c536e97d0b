"""Run orchestration: TOML config ingestion, candidate evaluation against the
twin, artifact emission, mode comparison, and the exhaustive desk-scale
oracle."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

from . import codegen, evaluate as ev, plant as pl
from .evolution import (
    ConfigError,
    EvaluatedIndividual,
    EvolutionConfig,
    EvolutionResult,
    PAMode,
    evolve,
)
from .evaluate import ConstraintSet, FitnessParams, ObjectiveVector
from .genome import (
    GenomeBounds,
    GenomeRow,
    Individual,
    INPUTS,
    MODES,
    Operator,
    OUTPUTS,
    decode,
    individual_from_json,
    rows_to_json,
    validate,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

logger = logging.getLogger(__name__)

HISTORY_SCHEMA = "evoplc.history.v1"
OBJECTIVES_SCHEMA = "evoplc.objectives.v1"
COMPARE_SCHEMA = "evoplc.compare.v1"
FRONT_SCHEMA = "evoplc.front.v1"
REPORT_SCHEMA = "evoplc.report.v1"


class IoError(OSError):
    """An artifact directory or file could not be produced."""


class SpaceTooLarge(ValueError):
    """The genome space exceeds the exhaustive-enumeration guard."""


# --- run configuration ---------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    scenario: pl.Scenario
    bounds: GenomeBounds
    evolution: EvolutionConfig
    fitness: FitnessParams
    constraints: ConstraintSet
    out_dir: Path
    transport: str = "outflow"
    energy_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    export_trace: bool = False
    export_cold_store: bool = False
    jobs: int = 1
    profile: str = "default-synthetic"


def _segments_from_list(entries) -> tuple[pl.InputSegment, ...]:
    return tuple(
        pl.InputSegment(float(e["t_start"]), bool(e.get("B1", False)),
                        bool(e.get("B2", False)), bool(e.get("B3", False)))
        for e in entries
    )


def max_episode_outflow(scenario: pl.Scenario) -> float:
    """Volume the drain pumps could move running flat out all episode."""
    p = scenario.params
    return (p.q2 + p.q3) * scenario.duration


def config_from_dict(data: dict, *, base_dir: Optional[Path] = None) -> RunConfig:
    """Build a RunConfig from parsed TOML, deriving unstated defaults."""
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    try:
        scen_data = data.get("scenario", {})
        if "file" in scen_data:
            if "plant" in data:
                raise ConfigError("[plant] conflicts with scenario.file; "
                                  "the scenario file carries its own plant table")
            scenario = pl.scenario_from_toml(base / scen_data["file"])
        else:
            params = pl.plant_params_from_dict(data.get("plant", {}))
            segments = _segments_from_list(
                scen_data.get("inputs", [{"t_start": 0.0, "B1": True}]))
            scenario = pl.Scenario(
                duration=float(scen_data.get("duration", 120.0)),
                segments=segments, params=params)

        evo = data.get("evolution", {})
        bounds = GenomeBounds(
            r_min=int(evo.get("r_min", 4)),
            r_max=int(evo.get("r_max", 16)),
            operators=evo.get("operators", "full"),
        )
        evolution = EvolutionConfig(
            population_size=int(evo.get("population_size", 64)),
            generations=int(evo.get("generations", 200)),
            parents_per_recombination=int(evo.get("parents", 2)),
            mutation_rate=float(evo.get("mutation_rate", 0.05)),
            elitism_count=int(evo.get("elitism", 2)),
            pa_mode=PAMode(evo.get("pa_mode", "prior")),
            seed=int(evo.get("seed", 0)),
            tournament_size=int(evo.get("tournament", 4)),
            cold_store_cap=int(evo.get("cold_store_cap", 1024)),
        )

        fit = dict(data.get("fitness", {}))
        derived = ev.default_fitness_params(bounds, max_episode_outflow(scenario))
        fitness = FitnessParams(
            alpha1=float(fit.get("alpha1", derived.alpha1)),
            alpha2=float(fit.get("alpha2", derived.alpha2)),
            alpha3=float(fit.get("alpha3", derived.alpha3)),
            p_trans=float(fit.get("p_trans", derived.p_trans)),
            p_code=float(fit.get("p_code", derived.p_code)),
            p_energy_target=float(fit.get("p_energy_target", 0.0)),
            clamp_negative=bool(fit.get("clamp_negative", True)),
        )
        if fitness.p_code > bounds.r_max:
            raise ConfigError(f"code target {fitness.p_code} exceeds r_max {bounds.r_max}")

        cons = data.get("constraints", {})
        constraints = ConstraintSet(
            no_overflow=bool(cons.get("no_overflow", True)),
            no_underflow=bool(cons.get("no_underflow", True)),
            bounds=bounds,
        )

        out = data.get("output", {})
        return RunConfig(
            scenario=scenario,
            bounds=bounds,
            evolution=evolution,
            fitness=fitness,
            constraints=constraints,
            out_dir=base / out.get("dir", "run-out"),
            transport=fit.get("transport", "outflow"),
            energy_weights=tuple(fit.get("energy_weights", (1.0, 1.0, 1.0))),
            export_trace=bool(out.get("export_trace", False)),
            export_cold_store=bool(out.get("export_cold_store", False)),
            profile=data.get("plant", {}).get("profile", scenario.params.profile),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid run configuration: {exc}") from exc


def load_run_config(path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file does not parse: {exc}") from exc
    return config_from_dict(data, base_dir=path.parent)


# --- evaluation against the twin --------------------------------------------------


class PlantEvaluator:
    """Evaluates individuals on the twin with a semantic episode cache.

    Two candidates whose gated per-output truth tables coincide produce the
    same episode, so the summary is cached by those tables; compactness and
    feasibility still depend on the individual itself.
    """

    def __init__(self, scenario: pl.Scenario, bounds: GenomeBounds,
                 constraints: ConstraintSet, transport: str = "outflow",
                 energy_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)):
        self.scenario = scenario
        self.bounds = bounds
        self.constraints = constraints
        self.transport = transport
        self.energy_weights = energy_weights
        # programs agreeing on the scenario-reachable assignments share episodes
        self._mask = pl.reachable_image_mask(scenario)
        self._cache: dict[tuple[int, int, int, int], pl.EpisodeSummary] = {}

    def summary_for(self, individual: Individual) -> pl.EpisodeSummary:
        tables = pl.tables_from_individual(individual)
        key = (tables[0] & self._mask, tables[1] & self._mask,
               tables[2] & self._mask, tables[3] & self._mask)
        cached = self._cache.get(key)
        if cached is None:
            cached = pl.simulate_tables(tables, self.scenario, record=False).summary
            self._cache[key] = cached
        return cached

    def __call__(self, individual: Individual) -> tuple[ObjectiveVector, bool]:
        summary = self.summary_for(individual)
        obj = ev.objectives(summary, individual, bounds=self.bounds,
                            transport=self.transport,
                            energy_weights=self.energy_weights)
        return obj, ev.feasible(summary, individual, self.constraints)

    def evaluate_many(self, individuals: Sequence[Individual]
                      ) -> list[tuple[ObjectiveVector, bool]]:
        return [self(ind) for ind in individuals]

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state


_WORKER_EVALUATOR: Optional[PlantEvaluator] = None


def _init_worker(evaluator: PlantEvaluator) -> None:
    global _WORKER_EVALUATOR
    _WORKER_EVALUATOR = evaluator


def _worker_eval(individuals: list[Individual]):
    return _WORKER_EVALUATOR.evaluate_many(individuals)


class ParallelEvaluator:
    """Fans evaluation out over a process pool; results keep input order, so
    schedules cannot change outcomes."""

    def __init__(self, inner: PlantEvaluator, jobs: int):
        self.inner = inner
        self.jobs = max(1, jobs)
        self._pool: Optional[ProcessPoolExecutor] = None

    def __call__(self, individual: Individual):
        return self.inner(individual)

    def evaluate_many(self, individuals: Sequence[Individual]):
        if self.jobs == 1 or len(individuals) < 2 * self.jobs:
            return self.inner.evaluate_many(individuals)
        if self._pool is None:
            self._pool = ProcessPoolExecutor(
                self.jobs, initializer=_init_worker, initargs=(self.inner,))
        chunk = math.ceil(len(individuals) / self.jobs)
        chunks = [list(individuals[i:i + chunk])
                  for i in range(0, len(individuals), chunk)]
        out: list = []
        for part in self._pool.map(_worker_eval, chunks):
            out.extend(part)
        return out

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None


# --- artifact writers --------------------------------------------------------------


def _fmt(value: float) -> str:
    return repr(float(value))


def write_history_csv(history, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={HISTORY_SCHEMA}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["generation", "best_fitness", "mean_fitness",
                         "front_size", "feasible_count"])
        for g in history:
            writer.writerow([g.generation, _fmt(g.best_fitness),
                             _fmt(g.mean_fitness), g.front_size, g.feasible_count])


def read_history_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != f"# schema={HISTORY_SCHEMA}":
            raise ValueError(f"unexpected history schema line {first!r}")
        rows = list(csv.DictReader(fh))
    return [
        {"generation": int(r["generation"]),
         "best_fitness": float(r["best_fitness"]),
         "mean_fitness": float(r["mean_fitness"]),
         "front_size": int(r["front_size"]),
         "feasible_count": int(r["feasible_count"])}
        for r in rows
    ]


_OBJ_HEADER = ["id", "f1", "f2", "f3", "fitness", "feasible", "front_member"]


def _objective_rows(members, params: FitnessParams):
    front_ids = {id(m) for m in ev.pareto_front([m for m in members if m.feasible])}
    for m in members:
        fit = m.fitness if m.fitness is not None else ev.fitness(m.objectives, params)
        yield [m.individual.id, _fmt(m.objectives.f1_transport),
               _fmt(m.objectives.f2_energy), _fmt(m.objectives.f3_code),
               _fmt(fit), int(m.feasible), int(id(m) in front_ids)]


def write_objectives_csv(members, params: FitnessParams, path, *,
                         mode_tag: Optional[str] = None) -> None:
    tagged = mode_tag is not None
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={COMPARE_SCHEMA if tagged else OBJECTIVES_SCHEMA}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow((["mode"] if tagged else []) + _OBJ_HEADER)
        for row in _objective_rows(members, params):
            writer.writerow(([mode_tag] if tagged else []) + row)


def append_objectives_csv(members, params: FitnessParams, path, mode_tag: str) -> None:
    with open(path, "a", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in _objective_rows(members, params):
            writer.writerow([mode_tag] + row)


def read_objectives_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if not first.startswith("# schema=evoplc."):
            raise ValueError(f"unexpected objectives schema line {first!r}")
        return list(csv.DictReader(fh))


def front_to_json(members, params: FitnessParams, *, pa_mode: str,
                  seed: int) -> dict:
    entries = []
    for m in members:
        fit = m.fitness if m.fitness is not None else ev.fitness(m.objectives, params)
        entries.append({
            "id": m.individual.id,
            "generation": m.individual.generation_born,
            "objectives": {"f1": m.objectives.f1_transport,
                           "f2": m.objectives.f2_energy,
                           "f3": m.objectives.f3_code},
            "fitness": fit,
            "feasible": m.feasible,
            "genome": rows_to_json(m.individual),
        })
    return {"schema": FRONT_SCHEMA, "pa_mode": pa_mode, "seed": seed,
            "members": entries}


def _write_json(data: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def load_front_json(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") != FRONT_SCHEMA:
        raise ValueError(f"unexpected front schema {data.get('schema')!r}")
    return data


def write_program_artifacts(member: EvaluatedIndividual, out_dir: Path,
                            *, stem: str = "program",
                            seed: Optional[int] = None) -> list[str]:
    """Emit the three codegen artifacts for one individual."""
    ind = member.individual
    st = codegen.emit_structured_text(ind, seed=seed, objectives=member.objectives)
    il = codegen.emit_instruction_list(ind, seed=seed, objectives=member.objectives)
    summary = codegen.derive_behavior_summary(ind)
    summary_name = "summary.txt" if stem == "program" else f"{stem}.summary.txt"
    names = [f"{stem}.st", f"{stem}.il", summary_name]
    for name, text in zip(names, (st.text, il, summary.text)):
        (out_dir / name).write_text(text, encoding="ascii")
    return names


# --- run / compare / oracle ----------------------------------------------------------


@dataclass
class RunReport:
    schema: str
    pa_mode: str
    seed: int
    generations: int
    best_fitness: Optional[float]
    front_size: int
    feasible_count: int
    files: list[str]
    header: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema": self.schema, "pa_mode": self.pa_mode, "seed": self.seed,
                "generations": self.generations, "best_fitness": self.best_fitness,
                "front_size": self.front_size, "feasible_count": self.feasible_count,
                "files": self.files, "header": self.header}


def _selected_members(result: EvolutionResult, params: FitnessParams
                      ) -> tuple[list[EvaluatedIndividual], Optional[EvaluatedIndividual]]:
    """Front members (progressive) or the fitness argmax (prior), plus the
    knee pick used for the root program artifacts."""
    feasible = [m for m in result.population.members if m.feasible]
    front = ev.pareto_front(feasible)
    knee = result.best_feasible
    if knee is None and front:
        knee = max(front, key=lambda m: ev.fitness(m.objectives, params))
    return front, knee


def run(config: RunConfig) -> RunReport:
    """Execute one experiment and write its artifact set.

    Artifacts: history.csv, objectives.csv, front.json, the three program
    artifacts for the selected individual (plus per-front-member programs in
    progressive mode), and report.json. A run that fails after the output
    directory exists leaves a FAILED marker file next to any partial output.
    """
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise IoError(f"output directory {out} is not writable: {exc}") from exc

    evaluator = PlantEvaluator(config.scenario, config.bounds, config.constraints,
                               config.transport, config.energy_weights)
    wrapped = ParallelEvaluator(evaluator, config.jobs) if config.jobs > 1 else evaluator
    files: list[str] = []
    try:
        result = evolve(config.evolution, wrapped, bounds=config.bounds,
                        fitness_params=config.fitness)

        write_history_csv(result.history, out / "history.csv")
        files.append("history.csv")
        write_objectives_csv(result.population.members, config.fitness,
                             out / "objectives.csv")
        files.append("objectives.csv")

        front, knee = _selected_members(result, config.fitness)
        _write_json(front_to_json(front, config.fitness,
                                  pa_mode=config.evolution.pa_mode.value,
                                  seed=config.evolution.seed),
                    out / "front.json")
        files.append("front.json")

        if knee is not None:
            files += write_program_artifacts(knee, out, seed=config.evolution.seed)
            if config.export_trace:
                trace = pl.run_episode(decode(knee.individual), config.scenario)
                pl.write_trace_csv(trace, out / "best.trace.csv")
                files.append("best.trace.csv")
        if config.evolution.pa_mode is PAMode.PROGRESSIVE:
            member_dir = out / "front"
            member_dir.mkdir(exist_ok=True)
            for n, m in enumerate(front):
                files += [f"front/{name}" for name in write_program_artifacts(
                    m, member_dir, stem=f"member_{n:03d}",
                    seed=config.evolution.seed)]
        if config.export_cold_store:
            _write_json(front_to_json(result.cold_store, config.fitness,
                                      pa_mode=config.evolution.pa_mode.value,
                                      seed=config.evolution.seed),
                        out / "cold_store.json")
            files.append("cold_store.json")

        best_fit = None
        if knee is not None:
            best_fit = (knee.fitness if knee.fitness is not None
                        else ev.fitness(knee.objectives, config.fitness))
        report = RunReport(
            schema=REPORT_SCHEMA,
            pa_mode=config.evolution.pa_mode.value,
            seed=config.evolution.seed,
            generations=config.evolution.generations,
            best_fitness=best_fit,
            front_size=len(front),
            feasible_count=result.history[-1].feasible_count,
            files=sorted(files + ["report.json"]),
        )
        _write_json(report.to_dict(), out / "report.json")
        return report
    except Exception as exc:
        try:
            (out / "FAILED").write_text(f"{type(exc).__name__}: {exc}\n")
        except OSError:
            pass
        raise
    finally:
        if isinstance(wrapped, ParallelEvaluator):
            wrapped.close()


@dataclass
class ComparisonReport:
    prior: RunReport
    progressive: RunReport
    coverage_prior_dominated: float
    coverage_progressive_dominated: float
    merged_rows: int
    files: list[str]


def _coverage(victims: list[ObjectiveVector], hunters: list[ObjectiveVector]) -> float:
    """Fraction of victims strictly dominated by some hunter."""
    if not victims:
        return 0.0
    hit = sum(1 for v in victims if any(ev.dominates(h, v) for h in hunters))
    return hit / len(victims)


def compare(config_prior: RunConfig, config_progressive: RunConfig,
            out_dir: Optional[Path] = None) -> ComparisonReport:
    """Run both articulation modes on a shared plant and scenario.

    Emits each run's artifact set, a merged mode-tagged objective CSV, and
    mutual front-coverage metrics.
    """
    if config_prior.scenario != config_progressive.scenario:
        raise ConfigError("compared configs must share the plant and scenario")
    if config_prior.evolution.pa_mode is not PAMode.PRIOR:
        config_prior = replace(config_prior, evolution=replace(
            config_prior.evolution, pa_mode=PAMode.PRIOR))
    if config_progressive.evolution.pa_mode is not PAMode.PROGRESSIVE:
        config_progressive = replace(config_progressive, evolution=replace(
            config_progressive.evolution, pa_mode=PAMode.PROGRESSIVE))

    out = Path(out_dir) if out_dir is not None else Path(config_prior.out_dir).parent / "comparison"
    config_prior = replace(config_prior, out_dir=out / "prior")
    config_progressive = replace(config_progressive, out_dir=out / "progressive")

    report_prior = run(config_prior)
    report_prog = run(config_progressive)

    prior_front = load_front_json(out / "prior" / "front.json")["members"]
    prog_front = load_front_json(out / "progressive" / "front.json")["members"]

    def vectors(entries):
        return [ObjectiveVector(e["objectives"]["f1"], e["objectives"]["f2"],
                                e["objectives"]["f3"]) for e in entries]

    vp, vg = vectors(prior_front), vectors(prog_front)
    merged = out / "objective_space.csv"
    with open(merged, "w", newline="") as fh:
        fh.write(f"# schema={COMPARE_SCHEMA}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["mode"] + _OBJ_HEADER)
        for tag, entries in (("prior", prior_front), ("progressive", prog_front)):
            for e in entries:
                writer.writerow([tag, e["id"], _fmt(e["objectives"]["f1"]),
                                 _fmt(e["objectives"]["f2"]), _fmt(e["objectives"]["f3"]),
                                 _fmt(e["fitness"]), int(e["feasible"]), 1])

    comparison = ComparisonReport(
        prior=report_prior,
        progressive=report_prog,
        coverage_prior_dominated=_coverage(vp, vg),
        coverage_progressive_dominated=_coverage(vg, vp),
        merged_rows=len(prior_front) + len(prog_front),
        files=["prior", "progressive", "objective_space.csv", "comparison.json"],
    )
    _write_json({
        "schema": "evoplc.comparison.v1",
        "coverage_prior_dominated": comparison.coverage_prior_dominated,
        "coverage_progressive_dominated": comparison.coverage_progressive_dominated,
        "merged_rows": comparison.merged_rows,
        "prior": report_prior.to_dict(),
        "progressive": report_prog.to_dict(),
    }, out / "comparison.json")
    return comparison


# --- exhaustive oracle ----------------------------------------------------------------


def count_genome_space(bounds: GenomeBounds) -> int:
    """Closed-form count of valid individuals within the bounds."""
    opener_choices = len(INPUTS) * 2          # input x negation; mode is the key
    cont_choices = (len(INPUTS) * 2 * len(MODES)
                    * len(bounds.continuation_operators()))
    n_keys = len(OUTPUTS) * len(MODES)
    total = 0
    for n in range(bounds.r_min, bounds.r_max + 1):
        for r in range(1, min(n, n_keys) + 1):
            arrangements = math.perm(n_keys, r)
            compositions = math.comb(n - 1, r - 1)
            total += (arrangements * compositions
                      * opener_choices ** r * cont_choices ** (n - r))
    return total


def _iter_rungs(length: int, key, bounds: GenomeBounds):
    """All rung row-lists of a given length for one (output, mode) key."""
    output, mode = key
    cont_ops = bounds.continuation_operators()

    def extend(rows, remaining):
        if remaining == 0:
            yield list(rows)
            return
        for inp in INPUTS:
            for neg in (False, True):
                if not rows:
                    row = GenomeRow(output, inp, Operator.ASSIGN, neg, mode)
                    yield from extend([row], remaining - 1)
                else:
                    for op in cont_ops:
                        for m in MODES:
                            row = GenomeRow(None, inp, op, neg, m)
                            yield from extend(rows + [row], remaining - 1)

    yield from extend([], length)


def iter_genome_space(bounds: GenomeBounds):
    """Deterministic enumeration of every valid individual within bounds."""
    keys = [(o, m) for m in MODES for o in OUTPUTS]

    def arrangements(n_rows, available):
        if n_rows == 0:
            yield []
            return
        for i, key in enumerate(available):
            for length in range(1, n_rows + 1):
                rest_keys = available[:i] + available[i + 1:]
                if n_rows - length == 0:
                    for rung in _iter_rungs(length, key, bounds):
                        yield [(key, rung)]
                elif rest_keys:
                    for rung in _iter_rungs(length, key, bounds):
                        for tail in arrangements(n_rows - length, rest_keys):
                            yield [(key, rung)] + tail

    counter = 0
    for n in range(bounds.r_min, bounds.r_max + 1):
        for arrangement in arrangements(n, keys):
            rows = tuple(row for _, rung in arrangement for row in rung)
            yield Individual(rows, id=counter, generation_born=0)
            counter += 1


def enumerate_oracle(bounds: GenomeBounds, scenario: pl.Scenario, *,
                     constraints: Optional[ConstraintSet] = None,
                     transport: str = "outflow",
                     energy_weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
                     guard: int = 10 ** 6
                     ) -> tuple[list[EvaluatedIndividual], list[EvaluatedIndividual]]:
    """Exhaustively evaluate the whole genome space and its exact front.

    Returns (all evaluated individuals, the Pareto front over the feasible
    ones). Raises SpaceTooLarge before enumerating anything when the space
    exceeds the guard.
    """
    size = count_genome_space(bounds)
    if size > guard:
        raise SpaceTooLarge(f"genome space holds {size} individuals, guard is {guard}")
    constraints = constraints or ConstraintSet(bounds=bounds)
    evaluator = PlantEvaluator(scenario, bounds, constraints, transport, energy_weights)
    evaluated = []
    for ind in iter_genome_space(bounds):
        obj, feas = evaluator(ind)
        evaluated.append(EvaluatedIndividual(ind, obj, None, feas))
    front = ev.pareto_front([m for m in evaluated if m.feasible])
    return evaluated, front


def oracle(config: RunConfig) -> dict:
    """CLI-facing oracle: evaluate the whole space, write CSV + front JSON."""
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out}: {exc}") from exc
    evaluated, front = enumerate_oracle(
        config.bounds, config.scenario, constraints=config.constraints,
        transport=config.transport, energy_weights=config.energy_weights)
    write_objectives_csv(evaluated, config.fitness, out / "oracle_objectives.csv")
    _write_json(front_to_json(front, config.fitness, pa_mode="oracle",
                              seed=config.evolution.seed),
                out / "oracle_front.json")
    return {"space_size": len(evaluated), "front_size": len(front),
            "files": ["oracle_objectives.csv", "oracle_front.json"]}


def decode_genome_file(path, out_dir) -> list[str]:
    """Standalone genome JSON to the three program artifacts."""
    path = Path(path)
    out = Path(out_dir)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"genome file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"genome file does not parse: {exc}") from exc
    individual = individual_from_json(data)
    problems = validate(individual)
    if problems:
        detail = "; ".join(v.message for v in problems)
        raise ConfigError(f"genome is not valid: {detail}")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out}: {exc}") from exc
    st = codegen.emit_structured_text(individual)
    il = codegen.emit_instruction_list(individual)
    summary = codegen.derive_behavior_summary(individual)
    names = ["program.st", "program.il", "summary.txt"]
    for name, text in zip(names, (st.text, il, summary.text)):
        (out / name).write_text(text, encoding="ascii")
    return names
