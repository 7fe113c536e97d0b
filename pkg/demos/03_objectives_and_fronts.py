"""Scoring programs: objectives, scalar fitness, and Pareto machinery.

Evaluates a few hand-picked programs on the twin, shows the three-objective
vectors, the bounded scalar fitness, and how dominance and the front sort a
mixed bag of candidates.
"""

import evoplc as e
from evoplc.experiment import max_episode_outflow
from evoplc.genome import GenomeRow, InputSignal, Mode, Operator, OutputSignal

scenario = e.default_scenario()
bounds = e.GenomeBounds()
constraints = e.ConstraintSet(bounds=bounds)
params = e.default_fitness_params(bounds, max_episode_outflow(scenario))
print(f"fitness targets: transport {params.p_trans}, code {params.p_code}, "
      f"alphas ({params.alpha1}, {params.alpha2}, {params.alpha3})")

evaluator = e.PlantEvaluator(scenario, bounds, constraints)


def assess(name, individual):
    objectives, feasible = evaluator(individual)
    score = e.fitness(objectives, params)
    tag = "feasible" if feasible else "INFEASIBLE"
    print(f"\n{name}: {tag}")
    print(f"  f1 transport {objectives.f1_transport:8.3f}")
    print(f"  f2 energy    {objectives.f2_energy:8.1f}")
    print(f"  f3 code      {objectives.f3_code:8.1f}")
    print(f"  fitness      {score:8.4f}")
    return objectives


A = Mode.AUTOMATIC


def one_rung(output, inp, neg=False):
    return GenomeRow(output, inp, Operator.ASSIGN, neg, A)


reference = e.reference_controller()
ref_vec = assess("reference controller", reference)

quiet = e.Individual((one_rung(OutputSignal.L1, InputSignal.B1),))
assess("light only, pumps off", quiet)

greedy = e.Individual((one_rung(OutputSignal.P1, InputSignal.B1),))
assess("fill forever (overflows)", greedy)

drop_gate = e.Individual((
    one_rung(OutputSignal.P1, InputSignal.B1),
    one_rung(OutputSignal.P2, InputSignal.S2),
    one_rung(OutputSignal.P3, InputSignal.S1),
    one_rung(OutputSignal.L1, InputSignal.B1),
))
vec = assess("compact variant of the reference law", drop_gate)

print("\ndominance: compact variant vs reference ->",
      e.dominates(vec, ref_vec))

# A small front: evaluate a batch of random candidates and keep the
# nondominated feasible ones.
members = []
for seed in range(300):
    ind = e.random_individual(seed, bounds)
    objectives, feasible = evaluator(ind)
    if feasible:
        members.append(e.EvaluatedIndividual(ind, objectives,
                                             e.fitness(objectives, params), True))
front = e.pareto_front(members)
print(f"\n{len(members)} feasible random candidates, front of {len(front)}:")
for m in sorted(front, key=lambda m: -m.fitness)[:8]:
    o = m.objectives
    print(f"  f1={o.f1_transport:7.3f} f2={o.f2_energy:7.1f} "
          f"f3={o.f3_code:4.1f} fitness={m.fitness:.4f}")
