"""Evolutionary loop: selection pre-order, rung-wise recombination, bounded
mutation, and the generation cycle in both scalar-fitness and
nondominated-archive modes.

Determinism contract: every stochastic draw comes from a generator spawned
off the master seed with a stable spawn key (stream, generation, slot), so
the same seed and config reproduce bit-identical histories regardless of how
evaluation work is scheduled.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import evaluate as ev
from .evaluate import FitnessParams, ObjectiveVector
from .genome import (
    GenomeBounds,
    GenomeRow,
    Individual,
    INPUTS,
    Mode,
    MODES,
    Operator,
    OUTPUTS,
    RungKey,
    canonical_rungs,
    random_individual,
    rung_key,
    rung_slices,
)


class EmptyPopulation(ValueError):
    """Selection was asked to pick from a population with no members."""


class ConfigError(ValueError):
    """An evolution configuration violates its invariants."""


class PAMode(Enum):
    PRIOR = "prior"
    PROGRESSIVE = "progressive"


class Direction(Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


@dataclass(frozen=True)
class EvaluatedIndividual:
    individual: Individual
    objectives: ObjectiveVector
    fitness: Optional[float]
    feasible: bool


@dataclass
class Population:
    members: list[EvaluatedIndividual]
    capacity: int
    ordering: Optional[str] = None


@dataclass(frozen=True)
class EvolutionConfig:
    population_size: int = 64
    generations: int = 200
    parents_per_recombination: int = 2
    mutation_rate: float = 0.05
    elitism_count: int = 2
    pa_mode: PAMode = PAMode.PRIOR
    seed: int = 0
    tournament_size: int = 4
    cold_store_cap: int = 1024
    immigration_rate: float = 0.0

    def check(self) -> None:
        if self.population_size < 1:
            raise ConfigError("population size must be at least 1")
        if self.generations < 0:
            raise ConfigError("generation count cannot be negative")
        if self.parents_per_recombination < 2:
            raise ConfigError("recombination needs at least two parents")
        if self.parents_per_recombination > self.population_size:
            raise ConfigError("cannot draw more parents than the population holds")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ConfigError("mutation rate is a probability")
        if not 0 <= self.elitism_count <= self.population_size:
            raise ConfigError("elite count must fit in the population")
        if self.tournament_size < 1:
            raise ConfigError("tournament size must be at least 1")
        if not 0.0 <= self.immigration_rate <= 1.0:
            raise ConfigError("immigration rate is a probability")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float
    front_size: int
    feasible_count: int
    front: tuple[ObjectiveVector, ...]


@dataclass
class EvolutionResult:
    population: Population
    history: list[GenerationStats]
    best_feasible: Optional[EvaluatedIndividual]
    cold_store: list[EvaluatedIndividual]
    config: EvolutionConfig


# --- selection -------------------------------------------------------------------

_KEYS: dict[str, Callable[[EvaluatedIndividual], float]] = {
    "fitness": lambda m: m.fitness,
    "f1": lambda m: m.objectives.f1_transport,
    "f2": lambda m: m.objectives.f2_energy,
    "f3": lambda m: m.objectives.f3_code,
}


def _tiebreak(member: EvaluatedIndividual) -> tuple[int, int]:
    return (member.individual.generation_born, member.individual.id)


def select(population, count: int, direction: Direction = Direction.MAXIMIZE,
           key="fitness") -> list[EvaluatedIndividual]:
    """The ``count`` extremal members under the pre-order induced by ``key``.

    Ties break toward the older generation, then the lower id, so selection
    is fully deterministic. ``population`` may be a Population or a plain
    member list.
    """
    members = population.members if hasattr(population, "members") else list(population)
    if not members:
        raise EmptyPopulation("cannot select from an empty population")
    if count > len(members):
        raise ValueError(f"asked for {count} members from a population of {len(members)}")
    key_fn = _KEYS[key] if isinstance(key, str) else key
    for m in members:
        if key_fn(m) is None:
            raise ValueError("member not evaluated on the selection key")
    sign = -1.0 if direction is Direction.MAXIMIZE else 1.0
    ranked = sorted(members, key=lambda m: (sign * key_fn(m),) + _tiebreak(m))
    return ranked[:count]


# --- variation -------------------------------------------------------------------


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _repair_to_min(rows: list[GenomeRow], bounds: GenomeBounds, rng) -> list[GenomeRow]:
    """Grow a too-short row list back to r_min with fresh random material."""
    while len(rows) < bounds.r_min:
        used = {rung_key(rows, s) for s in rung_slices(rows)}
        free = [(o, m) for o in OUTPUTS for m in MODES if (o, m) not in used]
        inp = INPUTS[int(rng.integers(len(INPUTS)))]
        neg = bool(rng.integers(2))
        if free:
            out, mode = free[int(rng.integers(len(free)))]
            rows.append(GenomeRow(out, inp, Operator.ASSIGN, neg, mode))
        else:
            ops = bounds.continuation_operators()
            op = ops[int(rng.integers(len(ops)))]
            mode = MODES[int(rng.integers(2))]
            rows.append(GenomeRow(None, inp, op, neg, mode))
    return rows


def _canonicalize(rows: Sequence[GenomeRow], bounds: GenomeBounds,
                  rng) -> tuple[GenomeRow, ...]:
    rungs = canonical_rungs(rows)
    flat = [row for rung in rungs for row in rung]
    while len(flat) > bounds.r_max:
        rungs = rungs[:-1]  # drop whole rungs from the end
        flat = [row for rung in rungs for row in rung]
    flat = _repair_to_min(flat, bounds, rng)
    return tuple(flat)


def recombine(parents: Sequence[Individual], rng,
              bounds: Optional[GenomeBounds] = None) -> Individual:
    """Assemble a child rung-wise from its parents.

    Every (output, mode) rung present in any parent is inherited verbatim
    from one uniformly chosen parent possessing it; the child is then
    re-canonicalized and truncated to the row bound by dropping whole rungs
    from the end. Without explicit bounds no minimum-length repair applies.
    """
    if len(parents) < 2:
        raise ValueError("recombination needs at least two parents")
    rng = _as_rng(rng)
    owners: dict[RungKey, list[tuple[GenomeRow, ...]]] = {}
    for parent in parents:
        for rung in canonical_rungs(parent.rows):
            owners.setdefault((rung[0].output, rung[0].mode), []).append(rung)
    order = sorted(owners, key=lambda k: (0 if k[1] is Mode.AUTOMATIC else 1,
                                          k[0].index))
    rungs = []
    for key in order:
        candidates = owners[key]
        rungs.append(candidates[int(rng.integers(len(candidates)))])
    limit = bounds or GenomeBounds(r_min=1, r_max=GenomeBounds().r_max)
    # keys are unique by construction, so only truncation and repair remain
    total = sum(len(r) for r in rungs)
    while total > limit.r_max:
        total -= len(rungs.pop())
    rows = [row for rung in rungs for row in rung]
    return Individual(tuple(_repair_to_min(rows, limit, rng)))


def _redraw(rng, options, current):
    """Uniform draw from a domain excluding the current value."""
    alts = [o for o in options if o != current]
    if not alts:
        return current
    return alts[int(rng.integers(len(alts)))]


def _field_mutations(rows: list[GenomeRow], mu: float, bounds: GenomeBounds,
                     rng) -> list[GenomeRow]:
    cont_ops = bounds.continuation_operators()
    out = []
    for row in rows:
        output, inp, op, neg, mode = (row.output, row.input, row.operator,
                                      row.negated, row.mode)
        if output is not None and rng.random() < mu:
            output = _redraw(rng, OUTPUTS, output)
        if rng.random() < mu:
            inp = _redraw(rng, INPUTS, inp)
        if output is None and rng.random() < mu:
            op = _redraw(rng, cont_ops, op)
        if rng.random() < mu:
            neg = not neg
        if rng.random() < mu:
            mode = _redraw(rng, MODES, mode)
        out.append(GenomeRow(output, inp, op, neg, mode))
    return out


def _structural_edit(rows: list[GenomeRow], bounds: GenomeBounds, rng) -> list[GenomeRow]:
    slices = rung_slices(rows)
    edits = []
    if len(rows) < bounds.r_max:
        edits.append("insert")
    if len(rows) > bounds.r_min:
        edits.append("delete")
    if len(slices) >= 2:
        edits.append("swap")
    if not edits:
        return rows
    edit = edits[int(rng.integers(len(edits)))]
    if edit == "insert":
        used = {rung_key(rows, s) for s in slices}
        free = [(o, m) for o in OUTPUTS for m in MODES if (o, m) not in used]
        inp = INPUTS[int(rng.integers(len(INPUTS)))]
        neg = bool(rng.integers(2))
        if free and rng.integers(2):
            out, mode = free[int(rng.integers(len(free)))]
            rows.append(GenomeRow(out, inp, Operator.ASSIGN, neg, mode))
        else:
            ops = bounds.continuation_operators()
            pos = int(rng.integers(1, len(rows) + 1))
            rows.insert(pos, GenomeRow(None, inp,
                                       ops[int(rng.integers(len(ops)))],
                                       neg, MODES[int(rng.integers(2))]))
    elif edit == "delete":
        pos = int(rng.integers(len(rows)))
        victim = rows[pos]
        if victim.opens_rung() and pos + 1 < len(rows) and not rows[pos + 1].opens_rung():
            # promote the next literal so the rung survives
            nxt = rows[pos + 1]
            rows[pos + 1] = GenomeRow(victim.output, nxt.input, Operator.ASSIGN,
                                      nxt.negated, victim.mode)
            del rows[pos]
        elif victim.opens_rung() and len(slices) == 1:
            pass  # the only rung cannot lose its opener
        else:
            del rows[pos]
    else:  # swap adjacent rungs
        i = int(rng.integers(len(slices) - 1))
        (a0, a1), (b0, b1) = slices[i], slices[i + 1]
        rows[a0:b1] = rows[b0:b1] + rows[a0:a1]
    return rows


def mutate(individual: Individual, mu: float, bounds: GenomeBounds, rng) -> Individual:
    """Per-field mutation plus one optional structural edit.

    Each gene field flips with probability ``mu`` to a different legal value
    (singleton domains stay put); with the same probability one structural
    edit (insert row, delete row, swap adjacent rungs) applies within the
    row-count bounds. The result is re-canonicalized to a valid individual.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mutation rate is a probability")
    if mu == 0.0:
        return individual
    rng = _as_rng(rng)
    rows = _field_mutations(list(individual.rows), mu, bounds, rng)
    if rng.random() < mu:
        rows = _structural_edit(rows, bounds, rng)
    return Individual(_canonicalize(rows, bounds, rng),
                      id=individual.id, generation_born=individual.generation_born)


# --- archive pruning -------------------------------------------------------------


def _dedup_by_vector(members: list[EvaluatedIndividual]
                     ) -> tuple[list[EvaluatedIndividual], list[EvaluatedIndividual]]:
    """Keep the first (oldest) member per objective vector."""
    seen: set[tuple[float, float, float]] = set()
    kept, dropped = [], []
    for m in members:
        key = m.objectives.as_tuple()
        if key in seen:
            dropped.append(m)
        else:
            seen.add(key)
            kept.append(m)
    return kept, dropped


def crowding_prune(members: list[EvaluatedIndividual], capacity: int
                   ) -> tuple[list[EvaluatedIndividual], list[EvaluatedIndividual]]:
    """Drop the most crowded members until the archive fits.

    Crowding distance is the usual normalized neighbor gap per objective;
    boundary members are protected. Exact-duplicate vectors have zero
    distance and fall first. Deterministic: ties drop the youngest, highest
    id member. Returns (kept, dropped).
    """
    kept = list(members)
    dropped = []
    while len(kept) > capacity:
        m = ev.objective_matrix(kept)
        n = len(kept)
        dist = np.zeros(n)
        for col in range(m.shape[1]):
            order = np.argsort(m[:, col], kind="stable")
            col_vals = m[order, col]
            span = col_vals[-1] - col_vals[0]
            dist[order[0]] = np.inf
            dist[order[-1]] = np.inf
            if span <= 0.0:
                continue
            gaps = (col_vals[2:] - col_vals[:-2]) / span
            for pos in range(1, n - 1):
                if not np.isinf(dist[order[pos]]):
                    dist[order[pos]] += gaps[pos - 1]
        victim = min(range(n), key=lambda i: (dist[i],
                                              -kept[i].individual.generation_born,
                                              -kept[i].individual.id))
        dropped.append(kept.pop(victim))
    return kept, dropped


# --- the generation loop -----------------------------------------------------------

Evaluator = Callable[[Individual], tuple[ObjectiveVector, bool]]


def _rng_for(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _evaluate_members(individuals: list[Individual], evaluator,
                      params: FitnessParams, prior: bool) -> list[EvaluatedIndividual]:
    if hasattr(evaluator, "evaluate_many"):
        results = evaluator.evaluate_many(individuals)
    else:
        results = [evaluator(ind) for ind in individuals]
    members = []
    for ind, (obj, feas) in zip(individuals, results):
        fit = ev.fitness(obj, params) if prior else None
        members.append(EvaluatedIndividual(ind, obj, fit, feas))
    return members


def _posthoc_fitness(member: EvaluatedIndividual, params: FitnessParams) -> float:
    if member.fitness is not None:
        return member.fitness
    return ev.fitness(member.objectives, params)


def _stats(generation: int, members: list[EvaluatedIndividual],
           params: FitnessParams) -> GenerationStats:
    fits = [_posthoc_fitness(m, params) for m in members]
    feasible_members = [m for m in members if m.feasible]
    front = ev.pareto_front(feasible_members)
    return GenerationStats(
        generation=generation,
        best_fitness=max(fits) if fits else float("nan"),
        mean_fitness=sum(fits) / len(fits) if fits else float("nan"),
        front_size=len(front),
        feasible_count=len(feasible_members),
        front=tuple(m.objectives for m in front),
    )


def _spawn_offspring(pool: list[EvaluatedIndividual], config: EvolutionConfig,
                     bounds: GenomeBounds, params: FitnessParams,
                     rng: np.random.Generator) -> Individual:
    k = config.parents_per_recombination
    if not pool:
        return random_individual(rng, bounds)
    size = min(len(pool), max(config.tournament_size, k))
    n = len(pool)
    if size == n:
        picks = range(n)
    else:
        chosen: set[int] = set()
        while len(chosen) < size:
            chosen.add(int(rng.integers(n)))
        picks = sorted(chosen)
    entrants = [pool[i] for i in picks]
    if len(entrants) >= k:
        winners = select(entrants, k, Direction.MAXIMIZE,
                         key=lambda m: _posthoc_fitness(m, params))
        parents = [m.individual for m in winners]
    else:
        parents = [m.individual for m in entrants]
        parents = (parents * k)[:k]
    return mutate(recombine(parents, rng, bounds), config.mutation_rate, bounds, rng)


def evolve(config: EvolutionConfig, evaluator: Evaluator, *,
           bounds: GenomeBounds = GenomeBounds(),
           fitness_params: Optional[FitnessParams] = None,
           initial: Optional[Population] = None) -> EvolutionResult:
    """Run the generation cycle and return the final population, the
    per-generation history, the best feasible individual ever seen, and a
    bounded cold store of discarded members.

    Prior mode ranks by scalar fitness with elitist truncation; progressive
    mode maintains a nondominated archive of feasible members pruned by
    crowding spread. Infeasible members never parent offspring; when a
    generation has no feasible member at all, offspring are fresh random
    immigrants.
    """
    config.check()
    params = fitness_params or FitnessParams()
    prior = config.pa_mode is PAMode.PRIOR

    if initial is not None:
        individuals = [m.individual for m in initial.members]
        next_id = max((ind.id for ind in individuals), default=-1) + 1
    else:
        individuals = [
            random_individual(_rng_for(config.seed, 0, i), bounds,
                              id=i, generation_born=0)
            for i in range(config.population_size)
        ]
        next_id = config.population_size

    members = _evaluate_members(individuals, evaluator, params, prior)
    cold: collections.deque = collections.deque(maxlen=config.cold_store_cap)
    best_feasible: Optional[EvaluatedIndividual] = None

    def consider_best(candidates: Iterable[EvaluatedIndividual]) -> None:
        nonlocal best_feasible
        for m in candidates:
            if not m.feasible:
                continue
            if best_feasible is None:
                best_feasible = m
                continue
            fit_new = _posthoc_fitness(m, params)
            fit_old = _posthoc_fitness(best_feasible, params)
            if fit_new > fit_old or (fit_new == fit_old
                                     and _tiebreak(m) < _tiebreak(best_feasible)):
                best_feasible = m

    consider_best(members)
    if not prior:
        front = ev.pareto_front([m for m in members if m.feasible])
        unique, _ = _dedup_by_vector(front)
        keep, _ = crowding_prune(unique, config.population_size)
        kept_ids = {id(m) for m in keep}
        cold.extend(m for m in members if id(m) not in kept_ids)
        members = keep
    history = [_stats(0, members, params)]

    for gen in range(1, config.generations + 1):
        pool = [m for m in members if m.feasible]
        n_offspring = (config.population_size - config.elitism_count if prior
                       else config.population_size)
        n_immigrants = int(round(config.immigration_rate * n_offspring))
        offspring_inds = []
        for slot in range(n_offspring):
            rng = _rng_for(config.seed, 1, gen, slot)
            if slot < n_immigrants:
                child = random_individual(rng, bounds)
            else:
                child = _spawn_offspring(pool, config, bounds, params, rng)
            offspring_inds.append(replace(child, id=next_id, generation_born=gen))
            next_id += 1
        offspring = _evaluate_members(offspring_inds, evaluator, params, prior)
        consider_best(offspring)

        if prior:
            elites = select(members, config.elitism_count) if config.elitism_count else []
            elite_ids = {id(m) for m in elites}
            cold.extend(m for m in members if id(m) not in elite_ids)
            members = elites + offspring
        else:
            merged = members + [m for m in offspring if m.feasible]
            cold.extend(m for m in offspring if not m.feasible)
            front = ev.pareto_front(merged)
            unique, _ = _dedup_by_vector(front)
            keep, _ = crowding_prune(unique, config.population_size)
            kept_ids = {id(m) for m in keep}
            cold.extend(m for m in merged if id(m) not in kept_ids)
            members = keep
        history.append(_stats(gen, members, params))

    population = Population(members, config.population_size,
                            ordering="fitness" if prior else "nondominated")
    return EvolutionResult(population, history, best_feasible, list(cold), config)
