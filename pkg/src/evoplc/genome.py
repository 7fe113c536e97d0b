"""Tabular boolean-program genome: rows, validation, random build, decoding.

An individual is an ordered table of rows. A row that names an output opens a
rung (its operator is an assignment); rows without an output extend the
current rung with AND/OR literals, folded left-associatively in row order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import truthtab


class InputSignal(Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"


class OutputSignal(Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    L1 = "L1"


# positional index of each signal, set once (hot paths use it constantly)
for _i, _sig in enumerate(InputSignal):
    _sig.index = _i
for _i, _sig in enumerate(OutputSignal):
    _sig.index = _i


class Operator(Enum):
    ASSIGN = "ASSIGN"
    AND = "AND"
    OR = "OR"


class Mode(Enum):
    AUTOMATIC = "A"
    MANUAL = "M"


INPUTS = tuple(InputSignal)
OUTPUTS = tuple(OutputSignal)
MODES = (Mode.AUTOMATIC, Mode.MANUAL)

RungKey = tuple[OutputSignal, Mode]


class DecodeError(ValueError):
    """A continuation row appeared with no open rung."""


_OP_INDEX = {Operator.ASSIGN: 0, Operator.AND: 1, Operator.OR: 2}


@dataclass(frozen=True)
class GenomeRow:
    output: Optional[OutputSignal]
    input: InputSignal
    operator: Operator
    negated: bool = False
    mode: Mode = Mode.AUTOMATIC

    def __post_init__(self):
        # rows live in hot cache keys; precompute a perfect small-int hash
        out = 0 if self.output is None else self.output.index + 1
        code = (((out * 6 + self.input.index) * 3 + _OP_INDEX[self.operator]) * 2
                + int(self.negated)) * 2 + (0 if self.mode is Mode.AUTOMATIC else 1)
        object.__setattr__(self, "_code", code)

    def __hash__(self) -> int:
        return self._code

    def opens_rung(self) -> bool:
        return self.output is not None


@dataclass(frozen=True)
class GenomeBounds:
    """Row-count and alphabet bounds of the genome search space."""

    r_min: int = 4
    r_max: int = 16
    operators: str = "full"  # "full" allows OR continuations, "paper" AND only

    def __post_init__(self):
        if self.r_min < 1 or self.r_min > self.r_max:
            raise ValueError(f"need 1 <= r_min <= r_max, got {self.r_min}..{self.r_max}")
        if self.operators not in ("full", "paper"):
            raise ValueError(f"unknown operator alphabet {self.operators!r}")

    def continuation_operators(self) -> tuple[Operator, ...]:
        if self.operators == "paper":
            return (Operator.AND,)
        return (Operator.AND, Operator.OR)


@dataclass(frozen=True)
class Individual:
    rows: tuple[GenomeRow, ...]
    id: int = 0
    generation_born: int = 0

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Violation:
    row: Optional[int]
    rule: str
    message: str


# --- boolean expressions -------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    signal: InputSignal
    negated: bool = False

    def table(self) -> int:
        return truthtab.literal_table(self.signal.index, self.negated)


@dataclass(frozen=True)
class BoolOp:
    op: Operator  # AND or OR
    left: "BoolExpr"
    right: "BoolExpr"

    def table(self) -> int:
        lt, rt = self.left.table(), self.right.table()
        return (lt & rt) if self.op is Operator.AND else (lt | rt)


BoolExpr = Union[Literal, BoolOp]


def expr_table(expr: Optional[BoolExpr]) -> int:
    """Truth table of an expression; None is the implicit constant false."""
    return 0 if expr is None else expr.table()


@dataclass(frozen=True)
class RungExpression:
    target: OutputSignal
    mode: Mode
    expr: Optional[BoolExpr]  # None = constant false
    implicit: bool = False

    def table(self) -> int:
        return expr_table(self.expr)


# --- structural helpers --------------------------------------------------------


def rung_slices(rows: Sequence[GenomeRow]) -> list[tuple[int, int]]:
    """(start, end) row ranges of each rung, in row order."""
    slices = []
    start = None
    for i, row in enumerate(rows):
        if row.opens_rung():
            if start is not None:
                slices.append((start, i))
            start = i
    if start is not None:
        slices.append((start, len(rows)))
    return slices


def rung_key(rows: Sequence[GenomeRow], slc: tuple[int, int]) -> RungKey:
    opener = rows[slc[0]]
    return (opener.output, opener.mode)


@lru_cache(maxsize=1 << 14)
def _canonical_rungs_cached(rows: tuple[GenomeRow, ...]
                            ) -> tuple[tuple[GenomeRow, ...], ...]:
    slices = rung_slices(rows)
    last = {}
    for n, slc in enumerate(slices):
        last[rung_key(rows, slc)] = n
    keep = sorted(last.values())
    return tuple(rows[slices[n][0]:slices[n][1]] for n in keep)


def canonical_rungs(rows: Sequence[GenomeRow]
                    ) -> tuple[tuple[GenomeRow, ...], ...]:
    """Rungs after last-write-wins resolution of duplicate (output, mode) keys.

    Surviving rungs keep their relative row order.
    """
    return _canonical_rungs_cached(tuple(rows))


def row_chain(rung_rows: Sequence[GenomeRow]) -> list[tuple[int, bool, str]]:
    return [(r.input.index, r.negated,
             "OR" if r.operator is Operator.OR else "AND") for r in rung_rows]


# --- operations ----------------------------------------------------------------


def validate(individual: Individual, bounds: Optional[GenomeBounds] = None) -> list[Violation]:
    """Structural violations of an individual; empty means valid.

    Violations are data, not failures: callers decide what to do with them.
    Row-count bounds are checked only when ``bounds`` is supplied.
    """
    out: list[Violation] = []
    rows = individual.rows
    if not rows:
        out.append(Violation(None, "nonempty", "individual has no rows"))
        return out
    if not rows[0].opens_rung():
        out.append(Violation(0, "first-row-opens",
                             "row 0 opens nothing: first row must name an output"))
    seen: dict[RungKey, int] = {}
    for i, row in enumerate(rows):
        if row.opens_rung():
            if row.operator is not Operator.ASSIGN:
                out.append(Violation(i, "opener-assigns",
                                     f"row {i} opens a rung but its operator is "
                                     f"{row.operator.value}, not ASSIGN"))
            key = (row.output, row.mode)
            if key in seen:
                out.append(Violation(i, "unique-rung",
                                     f"row {i} opens a duplicate rung for "
                                     f"{row.output.value}/{row.mode.value} "
                                     f"(first opened at row {seen[key]})"))
            else:
                seen[key] = i
        elif row.operator is Operator.ASSIGN:
            out.append(Violation(i, "continuation-extends",
                                 f"row {i} extends a rung but its operator is ASSIGN"))
    if bounds is not None and len(rows) > bounds.r_max:
        out.append(Violation(None, "row-bound",
                             f"{len(rows)} rows exceed the bound of {bounds.r_max}"))
    return out


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_individual(rng, bounds: GenomeBounds, *, id: int = 0,
                      generation_born: int = 0) -> Individual:
    """Uniformly random valid individual within ``bounds``.

    Row count is uniform on [r_min, r_max]; each categorical field is drawn
    uniformly from its legal domain given the position (the output slot's
    domain includes "no output" for continuation rows). Deterministic for a
    given seed.
    """
    rng = _as_rng(rng)
    n = int(rng.integers(bounds.r_min, bounds.r_max + 1))
    cont_ops = bounds.continuation_operators()
    used: set[RungKey] = set()
    rows: list[GenomeRow] = []
    for pos in range(n):
        free = [o for o in OUTPUTS if any((o, m) not in used for m in MODES)]
        domain: list[Optional[OutputSignal]] = list(free) if pos == 0 else [None] + list(free)
        output = domain[int(rng.integers(len(domain)))]
        if output is None:
            operator = cont_ops[int(rng.integers(len(cont_ops)))]
            mode = MODES[int(rng.integers(2))]
        else:
            operator = Operator.ASSIGN
            free_modes = [m for m in MODES if (output, m) not in used]
            mode = free_modes[int(rng.integers(len(free_modes)))]
            used.add((output, mode))
        rows.append(GenomeRow(
            output=output,
            input=INPUTS[int(rng.integers(len(INPUTS)))],
            operator=operator,
            negated=bool(rng.integers(2)),
            mode=mode,
        ))
    return Individual(tuple(rows), id=id, generation_born=generation_born)


def decode(individual: Individual) -> list[RungExpression]:
    """Fold rows top-to-bottom into rung expressions.

    Outputs never assigned (in either mode) get an implicit constant-false
    rung appended, flagged ``implicit``. Raises DecodeError when a
    continuation row appears before any rung is open.
    """
    rungs: list[RungExpression] = []
    current: Optional[tuple[OutputSignal, Mode, BoolExpr]] = None
    for i, row in enumerate(individual.rows):
        lit = Literal(row.input, row.negated)
        if row.opens_rung():
            if current is not None:
                rungs.append(RungExpression(*current))
            current = (row.output, row.mode, lit)
        else:
            if current is None:
                raise DecodeError(f"row {i} extends a rung but none is open")
            target, mode, expr = current
            current = (target, mode, BoolOp(row.operator, expr, lit))
    if current is not None:
        rungs.append(RungExpression(*current))
    assigned = {r.target for r in rungs}
    for out in OUTPUTS:
        if out not in assigned:
            rungs.append(RungExpression(out, Mode.AUTOMATIC, None, implicit=True))
    return rungs


def encode_rungs(rungs: Iterable[RungExpression]) -> tuple[GenomeRow, ...]:
    """Rows whose decode reproduces the given (chain-shaped) rung expressions.

    Implicit rungs are skipped; non-chain trees (a right operand that is not
    a literal) cannot be expressed as rows and raise ValueError.
    """
    rows: list[GenomeRow] = []
    for rung in rungs:
        if rung.implicit or rung.expr is None:
            continue
        chain: list[tuple[Literal, Operator]] = []
        node = rung.expr
        while isinstance(node, BoolOp):
            if not isinstance(node.right, Literal):
                raise ValueError("expression is not a left-folded literal chain")
            chain.append((node.right, node.op))
            node = node.left
        if not isinstance(node, Literal):
            raise ValueError("expression is not a left-folded literal chain")
        chain.append((node, Operator.ASSIGN))
        chain.reverse()
        for k, (lit, op) in enumerate(chain):
            rows.append(GenomeRow(
                output=rung.target if k == 0 else None,
                input=lit.signal,
                operator=op,
                negated=lit.negated,
                mode=rung.mode,
            ))
    return tuple(rows)


@lru_cache(maxsize=1 << 16)
def _rung_effective_rows(chain: tuple[tuple[int, bool, str], ...]) -> int:
    if truthtab.chain_table(chain) == 0:
        return 0
    return len(truthtab.reduce_chain_indices(chain))


def effective_row_count(individual: Individual) -> int:
    """Rows that survive redundancy elimination.

    Mirrors the simplification pipeline: duplicate rungs resolve last-wins,
    contradictory rungs vanish entirely, and literals whose removal leaves a
    rung's truth table unchanged are not counted.
    """
    return sum(_rung_effective_rows(tuple(row_chain(rung_rows)))
               for rung_rows in canonical_rungs(individual.rows))


# --- JSON serialization ---------------------------------------------------------

_OP_JSON = {Operator.ASSIGN: "ASSIGN", Operator.AND: "AND", Operator.OR: "OR"}
_OP_FROM_JSON = {v: k for k, v in _OP_JSON.items()}


def rows_to_json(individual: Individual) -> list[dict]:
    """Genome rows as a JSON-ready list mirroring the table column order."""
    out = []
    for i, row in enumerate(individual.rows):
        out.append({
            "line": i,
            "output": row.output.value if row.output is not None else None,
            "input": row.input.value,
            "op": _OP_JSON[row.operator],
            "neg": bool(row.negated),
            "mode": row.mode.value,
        })
    return out


def individual_from_json(data: Sequence[dict], *, id: int = 0,
                         generation_born: int = 0) -> Individual:
    rows = []
    for entry in data:
        rows.append(GenomeRow(
            output=OutputSignal(entry["output"]) if entry["output"] is not None else None,
            input=InputSignal(entry["input"]),
            operator=_OP_FROM_JSON[entry["op"]],
            negated=bool(entry["neg"]),
            mode=Mode(entry["mode"]),
        ))
    return Individual(tuple(rows), id=id, generation_born=generation_born)


def reference_controller(*, id: int = 0, generation_born: int = 0) -> Individual:
    """The canonical three-level tank controller.

    Fill below the top threshold, drain progressively from the middle and
    bottom thresholds, light on in automatic mode.
    """
    A, AND, ASSIGN = Mode.AUTOMATIC, Operator.AND, Operator.ASSIGN
    rows = (
        GenomeRow(OutputSignal.P1, InputSignal.S3, ASSIGN, True, A),
        GenomeRow(None, InputSignal.B1, AND, False, A),
        GenomeRow(OutputSignal.P2, InputSignal.S2, ASSIGN, False, A),
        GenomeRow(None, InputSignal.B1, AND, False, A),
        GenomeRow(OutputSignal.P3, InputSignal.S1, ASSIGN, False, A),
        GenomeRow(None, InputSignal.B1, AND, False, A),
        GenomeRow(OutputSignal.L1, InputSignal.B1, ASSIGN, False, A),
    )
    return Individual(rows, id=id, generation_born=generation_born)
