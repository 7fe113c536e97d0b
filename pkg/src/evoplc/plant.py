"""Discrete-time digital twin of the three-sensor liquid tank station.

One pump fills the central tank, two pumps drain it, three level switches
with latching hysteresis report the level, and a decoded boolean program is
executed with PLC scan semantics: sample one consistent input image, evaluate
every rung against it, apply outputs, then integrate the physics for one scan
period.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .genome import (
    InputSignal,
    Mode,
    OutputSignal,
    RungExpression,
    canonical_rungs,
    row_chain,
)
from . import truthtab

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


class EpisodeError(ValueError):
    """The program references a signal the twin does not provide."""


@dataclass(frozen=True)
class PlantParams:
    capacity: float = 1.0
    q1: float = 0.08          # fill rate, volume/s
    q2: float = 0.05          # drain rates, volume/s
    q3: float = 0.05
    thresholds: tuple[float, float, float] = (0.25, 0.50, 0.75)
    hysteresis: float = 0.02
    dt: float = 0.1
    initial_level: float = 0.1
    profile: str = "default-synthetic"

    def __post_init__(self):
        l1, l2, l3 = self.thresholds
        if not (0.0 < l1 < l2 < l3 < self.capacity):
            raise ValueError(f"thresholds must satisfy 0 < L1 < L2 < L3 < capacity, got {self.thresholds}")
        h = self.hysteresis
        if not (0.0 < h < (l2 - l1) / 2 and h < (l3 - l2) / 2):
            raise ValueError(f"hysteresis band {h} overlaps adjacent thresholds")
        if min(self.q1, self.q2, self.q3) <= 0.0:
            raise ValueError("flow rates must be positive")
        if self.dt <= 0.0:
            raise ValueError("scan period must be positive")
        if not (0.0 <= self.initial_level <= self.capacity):
            raise ValueError("initial level outside the tank")


@dataclass(frozen=True)
class InputSegment:
    t_start: float
    b1: bool
    b2: bool = False
    b3: bool = False


@dataclass(frozen=True)
class Scenario:
    duration: float = 120.0
    segments: tuple[InputSegment, ...] = (InputSegment(0.0, True),)
    params: PlantParams = PlantParams()

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ValueError("duration must be positive")
        if not self.segments:
            raise ValueError("input schedule is empty")
        starts = [s.t_start for s in self.segments]
        if starts != sorted(starts) or starts[0] > 0.0:
            raise ValueError("input segments must start at 0 and be sorted")

    def cycles(self) -> int:
        return int(math.ceil(round(self.duration / self.params.dt, 9)))


def default_scenario(params: Optional[PlantParams] = None,
                     duration: float = 120.0) -> Scenario:
    """Automatic-mode scenario: mode switch high for the whole episode."""
    return Scenario(duration=duration,
                    segments=(InputSegment(0.0, True),),
                    params=params or PlantParams())


@dataclass(frozen=True)
class PlantState:
    level: float
    sensor_latch: tuple[bool, bool, bool]
    inputs: tuple[bool, bool, bool] = (False, False, False)
    outputs_applied: tuple[bool, bool, bool, bool] = (False, False, False, False)
    time: float = 0.0


class CycleRecord(NamedTuple):
    time: float
    level: float
    s1: bool
    s2: bool
    s3: bool
    b1: bool
    b2: bool
    b3: bool
    p1: bool
    p2: bool
    p3: bool
    l1: bool


@dataclass(frozen=True)
class EpisodeSummary:
    total_out_volume: float
    total_in_volume: float
    pump_on_seconds: tuple[float, float, float]
    overflow_events: int
    underflow_events: int
    final_level: float
    cycles: int


@dataclass(frozen=True)
class ScanTrace:
    records: tuple[CycleRecord, ...]
    summary: EpisodeSummary


def _latch(level: float, prior: tuple[bool, bool, bool],
           params: PlantParams) -> tuple[bool, bool, bool]:
    h = params.hysteresis
    s = [level >= t + h or (prior[i] and not level < t - h)
         for i, t in enumerate(params.thresholds)]
    # monotone closure: a higher switch being wet implies the lower ones are
    if s[2]:
        s[1] = True
    if s[1]:
        s[0] = True
    return (s[0], s[1], s[2])


def initial_state(params: PlantParams) -> PlantState:
    latch = _latch(params.initial_level, (False, False, False), params)
    return PlantState(level=params.initial_level, sensor_latch=latch)


def read_sensors(state: PlantState, params: PlantParams) -> tuple[bool, bool, bool]:
    """Schmitt-trigger sensor image: on at L+h, off below L-h, hold between."""
    return _latch(state.level, state.sensor_latch, params)


def _integrate(level: float, p1: bool, p2: bool, p3: bool,
               params: PlantParams) -> tuple[float, bool, bool, float, float]:
    """One scan period of tank physics.

    Returns (new_level, overflow, underflow, actual_in, actual_out); the
    actual volumes account for saturation at the tank limits.
    """
    dt = params.dt
    in_rate = params.q1 if p1 else 0.0
    out_rate = (params.q2 if p2 else 0.0) + (params.q3 if p3 else 0.0)
    raw = level + dt * (in_rate - out_rate)
    if raw > params.capacity:
        return (params.capacity, True, False,
                params.capacity - level + dt * out_rate, dt * out_rate)
    if raw < 0.0:
        return (0.0, False, True, dt * in_rate, level + dt * in_rate)
    return (raw, False, False, dt * in_rate, dt * out_rate)


def step(state: PlantState, commanded_outputs: tuple[bool, bool, bool, bool],
         params: PlantParams) -> PlantState:
    """Apply outputs and advance the plant by one scan period."""
    p1, p2, p3, _ = commanded_outputs
    level, _, _, _, _ = _integrate(state.level, p1, p2, p3, params)
    return PlantState(
        level=level,
        sensor_latch=_latch(level, state.sensor_latch, params),
        inputs=state.inputs,
        outputs_applied=tuple(commanded_outputs),
        time=state.time + params.dt,
    )


_B1_TABLE = truthtab.literal_table(InputSignal.B1.index)
_TABLE_MASK = truthtab.FULL_TABLE


def program_tables(program: Sequence[RungExpression]) -> tuple[int, int, int, int]:
    """Per-output truth tables over the scan image, mode gating folded in.

    Automatic rungs fire only when B1 is high, manual rungs only when B1 is
    low; duplicated (output, mode) rungs resolve last-write-wins; outputs
    with no rung are constant false.
    """
    auto = {out: 0 for out in OutputSignal}
    manual = {out: 0 for out in OutputSignal}
    for rung in program:
        if not isinstance(rung.target, OutputSignal):
            raise EpisodeError(f"program drives unknown signal {rung.target!r}")
        table = rung.table()
        if rung.mode is Mode.AUTOMATIC:
            auto[rung.target] = table
        else:
            manual[rung.target] = table
    gated = []
    for out in OutputSignal:
        gated.append((auto[out] & _B1_TABLE) | (manual[out] & ~_B1_TABLE & _TABLE_MASK))
    return tuple(gated)


_SCRIPT_CACHE: dict[Scenario, list[tuple[int, int, int]]] = {}


def _segment_bits(scenario: Scenario) -> list[tuple[int, int, int]]:
    cached = _SCRIPT_CACHE.get(scenario)
    if cached is not None:
        return cached
    n = scenario.cycles()
    dt = scenario.params.dt
    segs = scenario.segments
    bits = []
    k_seg = 0
    for k in range(n):
        t = k * dt
        while k_seg + 1 < len(segs) and segs[k_seg + 1].t_start <= t + 1e-12:
            k_seg += 1
        s = segs[k_seg]
        bits.append((int(s.b1), int(s.b2), int(s.b3)))
    _SCRIPT_CACHE[scenario] = bits
    return bits


# monotone latching admits only the ordered sensor states
_VALID_SENSOR_BITS = (0b000, 0b001, 0b011, 0b111)


def reachable_image_mask(scenario: Scenario) -> int:
    """Assignments the scan can ever present, as a truth-table mask.

    The scripted inputs take finitely many values and the latched sensors
    are always monotone (s3 wet implies s2 implies s1). Episodes depend on
    a program's tables only through these assignments.
    """
    mask = 0
    for b1, b2, b3 in set(_segment_bits(scenario)):
        base = b1 << 3 | b2 << 4 | b3 << 5
        for sensors in _VALID_SENSOR_BITS:
            mask |= 1 << (base | sensors)
    return mask


def _segment_spans(scenario: Scenario) -> list[tuple[int, int, tuple[int, int, int]]]:
    bits = _segment_bits(scenario)
    spans = []
    start = 0
    for k in range(1, len(bits) + 1):
        if k == len(bits) or bits[k] != bits[start]:
            spans.append((start, k, bits[start]))
            start = k
    return spans


def _simulate_summary(tables: tuple[int, int, int, int],
                      scenario: Scenario) -> EpisodeSummary:
    """Summary-only episode with event skipping.

    Between latch crossings, segment changes, and tank saturation the scan
    repeats the same arithmetic, so those cycles run in a bare repeated-add
    loop (bit-identical to the recording path) and the counters advance in
    closed form. Kept in exact numeric lockstep with the full loop; a test
    asserts equality of both paths.
    """
    params = scenario.params
    dt = params.dt
    q1, q2, q3 = params.q1, params.q2, params.q3
    cap = params.capacity
    l1, l2, l3 = params.thresholds
    h = params.hysteresis
    t1, t2, t3, _ = tables

    level = params.initial_level
    s1 = level >= l1 + h
    s2 = level >= l2 + h
    s3 = level >= l3 + h

    overflow_excess = 0.0
    underflow_shortfall = 0.0
    on1 = on2 = on3 = 0
    overflow = underflow = 0

    for k0, k1, (b1, b2, b3) in _segment_spans(scenario):
        k = k0
        while k < k1:
            idx = (int(s1) | int(s2) << 1 | int(s3) << 2
                   | b1 << 3 | b2 << 4 | b3 << 5)
            p1 = t1 >> idx & 1
            p2 = t2 >> idx & 1
            p3 = t3 >> idx & 1
            in_rate = q1 if p1 else 0.0
            out_rate = (q2 if p2 else 0.0) + (q3 if p3 else 0.0)
            delta = dt * (in_rate - out_rate)
            if delta == 0.0:
                run = k1 - k
                on1 += run * p1
                on2 += run * p2
                on3 += run * p3
                k = k1
                break
            if delta > 0.0:
                targets = [cap]
                if not s1:
                    targets.append(l1 + h)
                if not s2:
                    targets.append(l2 + h)
                if not s3:
                    targets.append(l3 + h)
                gap = min(targets) - level
            else:
                targets = [0.0]
                if s1:
                    targets.append(l1 - h)
                if s2:
                    targets.append(l2 - h)
                if s3:
                    targets.append(l3 - h)
                gap = level - max(targets)
            safe = int(gap / abs(delta)) - 2
            if safe > k1 - k:
                safe = k1 - k
            if safe >= 1:
                for _ in range(safe):
                    level += delta
                on1 += safe * p1
                on2 += safe * p2
                on3 += safe * p3
                k += safe
                continue
            # event vicinity: one careful cycle with the full rules
            raw = level + delta
            if raw > cap:
                overflow += 1
                overflow_excess += raw - cap
                level = cap
            elif raw < 0.0:
                underflow += 1
                underflow_shortfall += -raw
                level = 0.0
            else:
                level = raw
            on1 += p1
            on2 += p2
            on3 += p3
            k += 1
            s1 = level >= l1 + h or (s1 and not level < l1 - h)
            s2 = level >= l2 + h or (s2 and not level < l2 - h)
            s3 = level >= l3 + h or (s3 and not level < l3 - h)
            if s3:
                s2 = True
            if s2:
                s1 = True

    return EpisodeSummary(
        total_out_volume=max(0.0, dt * (q2 * on2 + q3 * on3) - underflow_shortfall),
        total_in_volume=max(0.0, dt * q1 * on1 - overflow_excess),
        pump_on_seconds=(on1 * dt, on2 * dt, on3 * dt),
        overflow_events=overflow,
        underflow_events=underflow,
        final_level=level,
        cycles=scenario.cycles(),
    )


def simulate_tables(tables: tuple[int, int, int, int], scenario: Scenario,
                    *, record: bool = True) -> ScanTrace:
    """Run a full episode from precomputed per-output truth tables."""
    if not record:
        return ScanTrace((), _simulate_summary(tables, scenario))
    params = scenario.params
    dt = params.dt
    q1, q2, q3 = params.q1, params.q2, params.q3
    cap = params.capacity
    l1, l2, l3 = params.thresholds
    h = params.hysteresis
    t1, t2, t3, t4 = tables
    script = _segment_bits(scenario)

    level = params.initial_level
    s1 = level >= l1 + h
    s2 = level >= l2 + h
    s3 = level >= l3 + h

    records: list[CycleRecord] = []
    overflow_excess = 0.0   # commanded inflow that never fit in the tank
    underflow_shortfall = 0.0  # commanded outflow the empty tank never gave
    on1 = on2 = on3 = 0
    overflow = underflow = 0

    for k, (b1, b2, b3) in enumerate(script):
        idx = (int(s1) | int(s2) << 1 | int(s3) << 2
               | b1 << 3 | b2 << 4 | b3 << 5)
        p1 = t1 >> idx & 1
        p2 = t2 >> idx & 1
        p3 = t3 >> idx & 1
        o4 = t4 >> idx & 1
        if record:
            records.append(CycleRecord(k * dt, level, s1, s2, s3,
                                       bool(b1), bool(b2), bool(b3),
                                       bool(p1), bool(p2), bool(p3), bool(o4)))
        in_rate = q1 if p1 else 0.0
        out_rate = (q2 if p2 else 0.0) + (q3 if p3 else 0.0)
        raw = level + dt * (in_rate - out_rate)
        if raw > cap:
            overflow += 1
            overflow_excess += raw - cap
            level = cap
        elif raw < 0.0:
            underflow += 1
            underflow_shortfall += -raw
            level = 0.0
        else:
            level = raw
        on1 += p1
        on2 += p2
        on3 += p3
        # re-latch sensors from the new level
        s1 = level >= l1 + h or (s1 and not level < l1 - h)
        s2 = level >= l2 + h or (s2 and not level < l2 - h)
        s3 = level >= l3 + h or (s3 and not level < l3 - h)
        if s3:
            s2 = True
        if s2:
            s1 = True

    summary = EpisodeSummary(
        total_out_volume=max(0.0, dt * (q2 * on2 + q3 * on3) - underflow_shortfall),
        total_in_volume=max(0.0, dt * q1 * on1 - overflow_excess),
        pump_on_seconds=(on1 * dt, on2 * dt, on3 * dt),
        overflow_events=overflow,
        underflow_events=underflow,
        final_level=level,
        cycles=len(script),
    )
    return ScanTrace(tuple(records), summary)


def run_episode(program: Sequence[RungExpression], scenario: Scenario,
                *, record: bool = True) -> ScanTrace:
    """Execute a decoded program against the twin for one full episode."""
    return simulate_tables(program_tables(program), scenario, record=record)


def tables_from_individual(individual) -> tuple[int, int, int, int]:
    """Gated per-output tables straight from genome rows.

    Equivalent to ``program_tables(decode(individual))`` without building
    expression trees; the evaluation hot path uses this.
    """
    auto = {out: 0 for out in OutputSignal}
    manual = {out: 0 for out in OutputSignal}
    for rung_rows in canonical_rungs(individual.rows):
        opener = rung_rows[0]
        table = truthtab.chain_table(row_chain(rung_rows))
        if opener.mode is Mode.AUTOMATIC:
            auto[opener.output] = table
        else:
            manual[opener.output] = table
    return tuple((auto[out] & _B1_TABLE) | (manual[out] & ~_B1_TABLE & _TABLE_MASK)
                 for out in OutputSignal)


# --- trace and scenario files ----------------------------------------------------

TRACE_SCHEMA = "evoplc.trace.v1"
_TRACE_HEADER = ["time", "level", "s1", "s2", "s3",
                 "B1", "B2", "B3", "P1", "P2", "P3", "L1"]


def write_trace_csv(trace: ScanTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={TRACE_SCHEMA}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_TRACE_HEADER)
        for rec in trace.records:
            writer.writerow([repr(rec.time), repr(rec.level)]
                            + [int(v) for v in rec[2:]])


def read_trace_csv(path) -> list[CycleRecord]:
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != f"# schema={TRACE_SCHEMA}":
            raise ValueError(f"unexpected trace schema line {first!r}")
        reader = csv.reader(fh)
        header = next(reader)
        if header != _TRACE_HEADER:
            raise ValueError("unexpected trace header")
        out = []
        for row in reader:
            out.append(CycleRecord(float(row[0]), float(row[1]),
                                   *[bool(int(v)) for v in row[2:]]))
        return out


def plant_params_from_dict(data: dict) -> PlantParams:
    kwargs = {}
    for key in ("capacity", "q1", "q2", "q3", "hysteresis", "dt",
                "initial_level", "profile"):
        if key in data:
            kwargs[key] = data[key]
    if "thresholds" in data:
        kwargs["thresholds"] = tuple(data["thresholds"])
    return PlantParams(**kwargs)


def scenario_from_toml(path) -> Scenario:
    """Load a scenario file: top-level duration, [plant], [[inputs]]."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    params = plant_params_from_dict(data.get("plant", {}))
    segments = tuple(
        InputSegment(float(seg["t_start"]), bool(seg.get("B1", False)),
                     bool(seg.get("B2", False)), bool(seg.get("B3", False)))
        for seg in data.get("inputs", [{"t_start": 0.0, "B1": True}])
    )
    return Scenario(duration=float(data.get("duration", 120.0)),
                    segments=segments, params=params)
