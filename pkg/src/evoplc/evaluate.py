"""Objectives, scalar fitness, feasibility, and dominance machinery.

The optimization problem maximizes transported volume (f1), minimizes energy
as weighted pump-on seconds (f2), and maximizes code compactness (f3), under
the constraint that an episode never saturates the tank at either limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .genome import GenomeBounds, Individual, effective_row_count
from .plant import EpisodeSummary, ScanTrace


class NumericalError(ArithmeticError):
    """A fitness denominator went non-positive with clamping disabled."""


@dataclass(frozen=True)
class ObjectiveVector:
    f1_transport: float  # maximize
    f2_energy: float     # minimize
    f3_code: float       # maximize

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.f1_transport, self.f2_energy, self.f3_code)


@dataclass(frozen=True)
class FitnessParams:
    """Weights and targets of the bounded sum-of-terms scalarization."""

    alpha1: float = 2.0
    alpha2: float = 5e-4
    alpha3: float = 0.1
    p_trans: float = 9.0
    p_code: float = 12.0
    p_energy_target: float = 0.0
    clamp_negative: bool = True

    def __post_init__(self):
        if min(self.alpha1, self.alpha2, self.alpha3) <= 0.0:
            raise ValueError("alpha weights must be positive")
        if self.p_trans <= 0.0:
            raise ValueError("transport target must be positive")
        if self.p_code <= 0.0:
            raise ValueError("code target must be positive")


def default_fitness_params(bounds: GenomeBounds, max_outflow: float,
                           *, transport_factor: float = 0.75) -> FitnessParams:
    """Targets derived from the plant and genome bounds.

    The transport target sits below the theoretical episode maximum so that
    well-performing controllers saturate the transport term and compete on
    energy and compactness; the code target saturates at the reference
    controller's seven effective rows, so equally-behaving programs at or
    below that complexity are not split by hairline code-term differences.
    """
    return FitnessParams(
        p_trans=max_outflow * transport_factor,
        p_code=float(max(1, bounds.r_max - 7)),
    )


@dataclass(frozen=True)
class ConstraintSet:
    """Feasibility predicates over an episode and the genome bounds."""

    no_overflow: bool = True
    no_underflow: bool = True
    bounds: GenomeBounds = GenomeBounds()
    extra: tuple[Callable[[EpisodeSummary, Individual], bool], ...] = ()


def _summary(trace) -> EpisodeSummary:
    return trace.summary if isinstance(trace, ScanTrace) else trace


def objectives(trace, individual: Individual, *,
               bounds: Optional[GenomeBounds] = None,
               transport: str = "outflow",
               energy_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)) -> ObjectiveVector:
    """Objective vector of one evaluated episode.

    f1 is the volume moved through the drain pumps (or through the fill pump
    with ``transport="inflow"``), f2 the weighted pump-on seconds, f3 the
    compactness headroom: r_max minus the rows that survive redundancy
    elimination.
    """
    s = _summary(trace)
    if transport == "outflow":
        f1 = s.total_out_volume
    elif transport == "inflow":
        f1 = s.total_in_volume
    else:
        raise ValueError(f"unknown transport accounting {transport!r}")
    w = energy_weights
    f2 = sum(w[i] * s.pump_on_seconds[i] for i in range(3))
    r_max = (bounds or GenomeBounds()).r_max
    f3 = float(max(0, r_max - effective_row_count(individual)))
    return ObjectiveVector(f1, f2, f3)


def feasible(trace, individual: Individual,
             constraints: ConstraintSet = ConstraintSet()) -> bool:
    """True iff every constraint predicate holds and the genome is in bounds."""
    s = _summary(trace)
    if constraints.no_overflow and s.overflow_events > 0:
        return False
    if constraints.no_underflow and s.underflow_events > 0:
        return False
    b = constraints.bounds
    if not (b.r_min <= len(individual.rows) <= b.r_max):
        return False
    return all(check(s, individual) for check in constraints.extra)


def fitness(obj: ObjectiveVector, params: FitnessParams) -> float:
    """Bounded sum of three saturating terms, each in (0, 1] when clamped.

    Transport and code terms reward closing the deficit to their targets;
    the energy term rewards low consumption relative to its (default zero)
    target. With clamping off, a deficit below -1/alpha makes a denominator
    non-positive and raises NumericalError.
    """
    d1 = params.p_trans - obj.f1_transport
    d2 = obj.f2_energy - params.p_energy_target
    d3 = params.p_code - obj.f3_code
    if params.clamp_negative:
        d1 = max(0.0, d1)
        d2 = max(0.0, d2)
        d3 = max(0.0, d3)
    den1 = 1.0 + params.alpha1 * d1
    den2 = 1.0 + params.alpha2 * d2
    den3 = 1.0 + params.alpha3 * d3
    if den1 <= 0.0 or den2 <= 0.0 or den3 <= 0.0:
        raise NumericalError(
            f"non-positive fitness denominator: {den1}, {den2}, {den3}")
    return 1.0 / den1 + 1.0 / den2 + 1.0 / den3


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """Strict Pareto dominance under the objective senses (max, min, max)."""
    ge = (a.f1_transport >= b.f1_transport
          and a.f2_energy <= b.f2_energy
          and a.f3_code >= b.f3_code)
    gt = (a.f1_transport > b.f1_transport
          or a.f2_energy < b.f2_energy
          or a.f3_code > b.f3_code)
    return ge and gt


def _vector_of(item, key):
    if key is not None:
        return key(item)
    if isinstance(item, ObjectiveVector):
        return item
    return item.objectives


def objective_matrix(items: Sequence, key=None) -> np.ndarray:
    """(n, 3) sign-normalized matrix: every column is maximized."""
    rows = []
    for item in items:
        v = _vector_of(item, key)
        rows.append((v.f1_transport, -v.f2_energy, v.f3_code))
    return np.asarray(rows, dtype=float)


def nondominated_mask(items: Sequence, key=None) -> np.ndarray:
    if not len(items):
        return np.zeros(0, dtype=bool)
    m = objective_matrix(items, key)
    ge = (m[:, None, :] >= m[None, :, :]).all(axis=2)
    gt = (m[:, None, :] > m[None, :, :]).any(axis=2)
    dominated = (ge & gt).any(axis=0)
    return ~dominated


def pareto_front(items: Sequence, key=None) -> list:
    """Items not strictly dominated by any other item.

    Input order is preserved and items with identical objective vectors are
    all retained (equal vectors do not dominate each other).
    """
    mask = nondominated_mask(items, key)
    return [item for item, keep in zip(items, mask) if keep]
