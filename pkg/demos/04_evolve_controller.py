"""Synthesizing a controller from scratch.

Runs the scalar-fitness evolutionary loop against the twin and watches the
population climb: random tables at generation zero, a clean fill/drain
control law at the end. Prints the learning curve and the winning program.
"""

import evoplc as e
from evoplc.experiment import PlantEvaluator, max_episode_outflow

scenario = e.default_scenario()
bounds = e.GenomeBounds()
constraints = e.ConstraintSet(bounds=bounds)
params = e.default_fitness_params(bounds, max_episode_outflow(scenario))

config = e.EvolutionConfig(population_size=64, generations=120, seed=7)
evaluator = PlantEvaluator(scenario, bounds, constraints)

print(f"evolving: population {config.population_size}, "
      f"{config.generations} generations, seed {config.seed}")
result = e.evolve(config, evaluator, bounds=bounds, fitness_params=params)

print("\nlearning curve (best / mean fitness, feasible count)")
for g in result.history[::10] + [result.history[-1]]:
    bar = "*" * int(g.best_fitness * 18)
    print(f"  gen {g.generation:3d}  best {g.best_fitness:.4f}  "
          f"mean {g.mean_fitness:.4f}  feasible {g.feasible_count:2d}  {bar}")

best = result.best_feasible
print(f"\nbest feasible individual (id {best.individual.id}, "
      f"born generation {best.individual.generation_born})")
o = best.objectives
print(f"  objectives: f1={o.f1_transport:.3f} f2={o.f2_energy:.1f} f3={o.f3_code}")
print(f"  fitness: {best.fitness:.4f}")

print("\nsynthesized structured text")
print(e.emit_structured_text(best.individual, seed=config.seed,
                             objectives=best.objectives).text)

print("behavior summary")
print(e.derive_behavior_summary(best.individual).text)

reference = e.reference_controller()
ref_objectives, _ = evaluator(reference)
print("reference controller objectives for comparison: "
      f"f1={ref_objectives.f1_transport:.3f} f2={ref_objectives.f2_energy:.1f} "
      f"f3={ref_objectives.f3_code}")
