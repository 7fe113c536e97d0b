"""Shared fixtures and independent oracles.

The oracle helpers deliberately avoid the package's truth-table bitmasks and
episode loop: expressions are evaluated recursively over explicit boolean
assignments, fronts are computed by plain pairwise comparison, and the plant
is re-simulated with a dict-based interpreter.
"""

import itertools
import time

import pytest

import evoplc as e
from evoplc.genome import Literal, InputSignal, Mode, Operator, OutputSignal


# --- independent boolean-expression oracle ------------------------------------


def eval_expr(expr, image: dict) -> bool:
    """Recursive evaluation over a named assignment; None is constant false."""
    if expr is None:
        return False
    if isinstance(expr, Literal):
        value = image[expr.signal.value]
        return (not value) if expr.negated else value
    left = eval_expr(expr.left, image)
    right = eval_expr(expr.right, image)
    return (left and right) if expr.op is Operator.AND else (left or right)


INPUT_NAMES = [s.value for s in InputSignal]


def all_images():
    for bits in itertools.product([False, True], repeat=6):
        yield dict(zip(INPUT_NAMES, bits))


def oracle_table(expr) -> frozenset:
    """Set of satisfying assignments, as value tuples in input order."""
    return frozenset(tuple(img[n] for n in INPUT_NAMES)
                     for img in all_images() if eval_expr(expr, img))


def rung_tables(individual) -> dict:
    """(output name, mode value) -> satisfying-assignment set, last wins."""
    tables = {}
    for rung in e.decode(individual):
        tables[(rung.target.value, rung.mode.value)] = oracle_table(rung.expr)
    return tables


def gated_output_tables(individual) -> dict:
    """Output name -> satisfying set with mode gating applied (scan view)."""
    auto = {o.value: frozenset() for o in OutputSignal}
    manual = {o.value: frozenset() for o in OutputSignal}
    for rung in e.decode(individual):
        target = auto if rung.mode is Mode.AUTOMATIC else manual
        target[rung.target.value] = oracle_table(rung.expr)
    b1_pos = INPUT_NAMES.index("B1")
    out = {}
    for name in auto:
        out[name] = frozenset(a for a in auto[name] if a[b1_pos]) | frozenset(
            a for a in manual[name] if not a[b1_pos])
    return out


# --- pairwise dominance oracle --------------------------------------------------


def dominates_oracle(a, b) -> bool:
    ge = a[0] >= b[0] and a[1] <= b[1] and a[2] >= b[2]
    gt = a[0] > b[0] or a[1] < b[1] or a[2] > b[2]
    return ge and gt


def front_oracle(vectors):
    """Indices of nondominated vectors by exhaustive pairwise comparison."""
    keep = []
    for i, v in enumerate(vectors):
        if not any(dominates_oracle(w, v) for j, w in enumerate(vectors) if j != i):
            keep.append(i)
    return keep


# --- plain-python plant re-simulation --------------------------------------------


def hand_simulate(individual, scenario):
    """Independent scan-cycle interpreter for cross-checking run_episode.

    Evaluates decoded rungs over dict images with mode gating, latches the
    three sensors with the dual-threshold rule, and integrates the level with
    the same clamping arithmetic. Returns per-cycle dict records plus event
    counters.
    """
    params = scenario.params
    l1, l2, l3 = params.thresholds
    h = params.hysteresis
    rungs = e.decode(individual)

    def latch(level, prior):
        s = []
        for i, thr in enumerate((l1, l2, l3)):
            if level >= thr + h:
                s.append(True)
            elif level < thr - h:
                s.append(False)
            else:
                s.append(prior[i])
        if s[2]:
            s[1] = True
        if s[1]:
            s[0] = True
        return s

    def scripted(t):
        current = scenario.segments[0]
        for seg in scenario.segments:
            if seg.t_start <= t + 1e-12:
                current = seg
        return current

    level = params.initial_level
    sensors = latch(level, [False, False, False])
    n = scenario.cycles()
    records = []
    overflow = underflow = 0
    for k in range(n):
        seg = scripted(k * params.dt)
        image = {"S1": sensors[0], "S2": sensors[1], "S3": sensors[2],
                 "B1": seg.b1, "B2": seg.b2, "B3": seg.b3}
        outputs = {"P1": False, "P2": False, "P3": False, "L1": False}
        for rung in rungs:
            fires = seg.b1 if rung.mode is Mode.AUTOMATIC else not seg.b1
            if fires:
                outputs[rung.target.value] = eval_expr(rung.expr, image)
        records.append({"time": k * params.dt, "level": level,
                        "sensors": tuple(sensors), "image": image,
                        "outputs": dict(outputs)})
        in_rate = params.q1 if outputs["P1"] else 0.0
        out_rate = ((params.q2 if outputs["P2"] else 0.0)
                    + (params.q3 if outputs["P3"] else 0.0))
        raw = level + params.dt * (in_rate - out_rate)
        if raw > params.capacity:
            overflow += 1
            level = params.capacity
        elif raw < 0.0:
            underflow += 1
            level = 0.0
        else:
            level = raw
        sensors = latch(level, sensors)
    return records, overflow, underflow, level


# --- shared fixtures ---------------------------------------------------------------


@pytest.fixture(scope="session")
def default_setup():
    scenario = e.default_scenario()
    bounds = e.GenomeBounds()
    constraints = e.ConstraintSet(bounds=bounds)
    from evoplc.experiment import max_episode_outflow
    params = e.default_fitness_params(bounds, max_episode_outflow(scenario))
    return scenario, bounds, constraints, params


@pytest.fixture(scope="session")
def reference():
    return e.reference_controller()


@pytest.fixture(scope="session")
def reference_member(default_setup, reference):
    scenario, bounds, constraints, params = default_setup
    evaluator = e.PlantEvaluator(scenario, bounds, constraints)
    objectives, feasible = evaluator(reference)
    assert feasible
    return e.EvaluatedIndividual(reference, objectives,
                                 e.fitness(objectives, params), feasible)


@pytest.fixture(scope="session")
def prior_default_runs(default_setup):
    """Twenty seeded default prior-mode runs plus their wall-clock cost.

    The evaluator is shared across seeds: it is a pure function of the
    genome, so caching across runs cannot change any outcome.
    """
    scenario, bounds, constraints, params = default_setup
    evaluator = e.PlantEvaluator(scenario, bounds, constraints)
    results = []
    start = time.perf_counter()
    for seed in range(20):
        config = e.EvolutionConfig(population_size=64, generations=200, seed=seed)
        results.append(e.evolve(config, evaluator, bounds=bounds,
                                fitness_params=params))
    wall = time.perf_counter() - start
    return results, wall
