import random

import pytest

import evoplc as e
from evoplc import plant as pl
from evoplc.evaluate import ObjectiveVector
from evoplc.genome import GenomeRow, InputSignal, Mode, Operator, OutputSignal
from conftest import front_oracle, dominates_oracle

A = Mode.AUTOMATIC


def vec(f1, f2, f3):
    return ObjectiveVector(float(f1), float(f2), float(f3))


def test_objectives_inert_program_is_zero_activity():
    scenario = e.default_scenario()
    ind = e.Individual((GenomeRow(OutputSignal.L1, InputSignal.B2, Operator.ASSIGN),))
    trace = pl.run_episode(e.decode(ind), scenario)
    obj = e.objectives(trace, ind)
    assert obj.f1_transport == 0.0
    assert obj.f2_energy == 0.0


def test_objectives_linear_accounting():
    # one drain pump for ten seconds from a full tank
    params = pl.PlantParams(initial_level=1.0)
    scenario = pl.default_scenario(params, duration=10.0)
    ind = e.Individual((GenomeRow(OutputSignal.P2, InputSignal.B1, Operator.ASSIGN),))
    trace = pl.run_episode(e.decode(ind), scenario)
    obj = e.objectives(trace, ind)
    assert obj.f1_transport == pytest.approx(0.5, rel=1e-9)
    assert obj.f2_energy == pytest.approx(10.0, rel=1e-9)
    assert trace.summary.underflow_events == 0


def test_objectives_reference_code_score(reference):
    scenario = e.default_scenario()
    trace = pl.run_episode(e.decode(reference), scenario)
    obj = e.objectives(trace, reference, bounds=e.GenomeBounds(r_max=16, r_min=4))
    assert obj.f3_code == 9.0


def test_objectives_transport_accounting_switch(reference):
    scenario = e.default_scenario()
    trace = pl.run_episode(e.decode(reference), scenario)
    out = e.objectives(trace, reference, transport="outflow")
    inn = e.objectives(trace, reference, transport="inflow")
    assert inn.f1_transport == trace.summary.total_in_volume
    assert out.f1_transport == trace.summary.total_out_volume
    with pytest.raises(ValueError):
        e.objectives(trace, reference, transport="sideways")


def test_objectives_energy_weights(reference):
    scenario = e.default_scenario()
    trace = pl.run_episode(e.decode(reference), scenario)
    obj = e.objectives(trace, reference, energy_weights=(2.0, 1.0, 0.0))
    s = trace.summary.pump_on_seconds
    assert obj.f2_energy == pytest.approx(2.0 * s[0] + s[1], rel=1e-12)


def test_feasible_rejects_overflow():
    scenario = e.default_scenario()
    ind = e.Individual((GenomeRow(OutputSignal.P1, InputSignal.B1, Operator.ASSIGN),))
    trace = pl.run_episode(e.decode(ind), scenario)
    constraints = e.ConstraintSet(bounds=e.GenomeBounds(r_min=1, r_max=16))
    assert not e.feasible(trace, ind, constraints)
    relaxed = e.ConstraintSet(no_overflow=False,
                              bounds=e.GenomeBounds(r_min=1, r_max=16))
    assert e.feasible(trace, ind, relaxed)


def test_feasible_reference_on_default_scenario(reference):
    scenario = e.default_scenario()
    trace = pl.run_episode(e.decode(reference), scenario)
    assert trace.summary.overflow_events == 0
    assert trace.summary.underflow_events == 0
    assert e.feasible(trace, reference, e.ConstraintSet(bounds=e.GenomeBounds()))


def test_feasible_rejects_out_of_bounds_genome(reference):
    scenario = e.default_scenario()
    rows = [GenomeRow(out, InputSignal.B2, Operator.ASSIGN)
            for out in (OutputSignal.P2, OutputSignal.P3)]
    rows += [GenomeRow(None, InputSignal.B2, Operator.AND) for _ in range(15)]
    ind = e.Individual(tuple(rows))
    trace = pl.run_episode(e.decode(ind), scenario)
    assert not e.feasible(trace, ind, e.ConstraintSet(bounds=e.GenomeBounds(r_max=16)))


def test_fitness_is_three_when_all_targets_met():
    for alpha in ((1.0, 1.0, 1.0), (2.0, 0.05, 0.5), (9.0, 0.001, 3.0)):
        params = e.FitnessParams(alpha1=alpha[0], alpha2=alpha[1], alpha3=alpha[2],
                                 p_trans=2.0, p_code=9.0)
        assert e.fitness(vec(2.0, 0.0, 9.0), params) == 3.0


def test_fitness_hand_substitution():
    params = e.FitnessParams(alpha1=1.0, alpha2=1.0, alpha3=1.0,
                             p_trans=2.0, p_code=9.0)
    assert e.fitness(vec(1.0, 1.0, 8.0), params) == pytest.approx(1.5, abs=1e-12)


def test_fitness_clamps_overshoot():
    params = e.FitnessParams(p_trans=2.0, p_code=9.0)
    assert e.fitness(vec(5.0, 0.0, 9.0), params) == e.fitness(vec(2.0, 0.0, 9.0), params)
    assert e.fitness(vec(2.0, 0.0, 12.0), params) == e.fitness(vec(2.0, 0.0, 9.0), params)


def test_fitness_unclamped_denominator_error():
    params = e.FitnessParams(alpha1=1.0, alpha2=1.0, alpha3=1.0,
                             p_trans=2.0, p_code=9.0, clamp_negative=False)
    with pytest.raises(e.NumericalError):
        e.fitness(vec(5.0, 0.0, 9.0), params)  # deficit -3 kills the denominator


def test_fitness_energy_target_deficit():
    params = e.FitnessParams(alpha1=1.0, alpha2=0.5, alpha3=1.0,
                             p_trans=1.0, p_code=1.0, p_energy_target=10.0)
    below = e.fitness(vec(1.0, 4.0, 1.0), params)
    assert below == 3.0  # under-target energy clamps to a full term
    over = e.fitness(vec(1.0, 14.0, 1.0), params)
    assert over == pytest.approx(2.0 + 1.0 / 3.0, abs=1e-12)


def test_fitness_params_validation():
    with pytest.raises(ValueError):
        e.FitnessParams(alpha1=0.0)
    with pytest.raises(ValueError):
        e.FitnessParams(p_trans=-1.0)
    with pytest.raises(ValueError):
        e.FitnessParams(p_code=0.0)


def test_dominates_examples():
    assert e.dominates(vec(2, 1, 3), vec(1, 2, 2))
    assert not e.dominates(vec(2, 1, 3), vec(2, 1, 3))
    assert not e.dominates(vec(2, 3, 3), vec(1, 2, 2))
    assert not e.dominates(vec(1, 2, 2), vec(2, 3, 3))


def test_dominates_random_properties():
    rnd = random.Random(7)
    vectors = [vec(rnd.randrange(5), rnd.randrange(5), rnd.randrange(5))
               for _ in range(400)]
    for v in vectors:
        assert not e.dominates(v, v)
    for _ in range(4000):
        a, b, c = rnd.sample(vectors, 3)
        assert not (e.dominates(a, b) and e.dominates(b, a))
        if e.dominates(a, b) and e.dominates(b, c):
            assert e.dominates(a, c)
        assert e.dominates(a, b) == dominates_oracle(a.as_tuple(), b.as_tuple())


def test_pareto_front_singleton():
    only = vec(1, 1, 1)
    assert e.pareto_front([only]) == [only]


def test_pareto_front_known_case():
    items = [vec(2, 1, 3), vec(1, 2, 2), vec(3, 0, 1)]
    front = e.pareto_front(items)
    assert front == [items[0], items[2]]


def test_pareto_front_total_dominance():
    boss = vec(9, 0, 9)
    items = [vec(1, 2, 3), boss, vec(2, 3, 1)]
    assert e.pareto_front(items) == [boss]


def test_pareto_front_keeps_duplicates_and_order():
    a, b = vec(2, 1, 3), vec(2, 1, 3)
    weak = vec(1, 2, 2)
    front = e.pareto_front([a, weak, b])
    assert front == [a, b]


def test_pareto_front_matches_pairwise_oracle():
    rnd = random.Random(3)
    items = [vec(rnd.randrange(6), rnd.randrange(6), rnd.randrange(6))
             for _ in range(300)]
    front = e.pareto_front(items)
    expected = [items[i] for i in front_oracle([v.as_tuple() for v in items])]
    assert front == expected


def test_pareto_front_idempotent():
    rnd = random.Random(5)
    items = [vec(rnd.random(), rnd.random(), rnd.random()) for _ in range(200)]
    front = e.pareto_front(items)
    assert e.pareto_front(front) == front


def test_front_accepts_members_with_objectives_attr(reference_member):
    assert e.pareto_front([reference_member]) == [reference_member]


def test_scalarization_argmax_is_nondominated():
    # with clamping off and positive deficits the scalarization is strictly
    # monotone, so its argmax over any finite set sits on that set's front
    rnd = random.Random(11)
    params = e.FitnessParams(alpha1=0.3, alpha2=0.05, alpha3=0.2,
                             p_trans=100.0, p_code=20.0, clamp_negative=False)
    for _ in range(50):
        items = [vec(rnd.uniform(0, 50), rnd.uniform(0, 50), rnd.uniform(0, 15))
                 for _ in range(60)]
        best = max(items, key=lambda v: e.fitness(v, params))
        assert best in e.pareto_front(items)
