"""Program transforms and PLC text emission for genome individuals.

The downstream pipeline: resolve duplicated rungs (last write wins, as in a
real scan), strip redundant literals and dead rungs without changing any
output's truth table, order rungs canonically, then emit structured text,
an instruction list, and a human-readable behavior summary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import truthtab
from .genome import (
    BoolOp,
    GenomeRow,
    Individual,
    InputSignal,
    Literal,
    Mode,
    Operator,
    OutputSignal,
    OUTPUTS,
    RungExpression,
    canonical_rungs,
    decode,
    row_chain,
    rung_slices,
)

_B1 = truthtab.literal_table(InputSignal.B1.index)
_NOT_B1 = truthtab.FULL_TABLE & ~_B1
_MODE_ORDER = {Mode.AUTOMATIC: 0, Mode.MANUAL: 1}


def resolve_priority(individual: Individual) -> Individual:
    """Keep only the last rung per (output, mode); scan order decides."""
    rows = [row for rung in canonical_rungs(individual.rows) for row in rung]
    return Individual(tuple(rows), id=individual.id,
                      generation_born=individual.generation_born)


def simplify(individual: Individual) -> Individual:
    """Remove redundancy without changing any output's truth table.

    Per rung: literals whose removal leaves the rung's table unchanged are
    dropped (duplicates absorb, tautologies shrink to a minimal
    ``x OR NOT x`` core), and a contradictory rung disappears entirely, its
    output reverting to the implicit constant false.
    """
    out_rows: list[GenomeRow] = []
    for rung_rows in canonical_rungs(individual.rows):
        chain = row_chain(rung_rows)
        if truthtab.chain_table(chain) == 0:
            continue
        kept = truthtab.reduce_chain_indices(chain)
        opener = rung_rows[0]
        for n, i in enumerate(kept):
            row = rung_rows[i]
            if n == 0:
                out_rows.append(GenomeRow(opener.output, row.input,
                                          Operator.ASSIGN, row.negated,
                                          opener.mode))
            else:
                out_rows.append(row)
    return Individual(tuple(out_rows), id=individual.id,
                      generation_born=individual.generation_born)


def canonical_order(individual: Individual) -> Individual:
    """Sort rungs by (mode, output); row order inside a rung is untouched."""
    rungs = [list(individual.rows[a:b])
             for a, b in rung_slices(individual.rows)]
    rungs.sort(key=lambda r: (_MODE_ORDER[r[0].mode], r[0].output.index))
    rows = [row for rung in rungs for row in rung]
    return Individual(tuple(rows), id=individual.id,
                      generation_born=individual.generation_born)


# --- structured text ----------------------------------------------------------


@dataclass(frozen=True)
class StStatement:
    output: OutputSignal
    mode: Mode
    expression: str
    guarded: bool
    implicit: bool

    def line(self) -> str:
        text = f"{self.output.value} := {self.expression};"
        if self.implicit:
            text += " (* implicit *)"
        if self.guarded:
            guard = "B1" if self.mode is Mode.AUTOMATIC else "NOT B1"
            text = f"IF {guard} THEN {text} END_IF;"
        return text


@dataclass(frozen=True)
class StructuredTextProgram:
    header: tuple[str, ...]
    statements: tuple[StStatement, ...]

    @property
    def text(self) -> str:
        lines = [f"(* {h} *)" for h in self.header]
        lines += [s.line() for s in self.statements]
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.text


def _render_expr(expr, parent_op: Optional[Operator] = None) -> str:
    if isinstance(expr, Literal):
        name = expr.signal.value
        return f"NOT {name}" if expr.negated else name
    left = _render_expr(expr.left, expr.op)
    right = _render_expr(expr.right, expr.op)
    text = f"{left} {expr.op.value} {right}"
    if parent_op is Operator.AND and expr.op is Operator.OR:
        return f"({text})"
    return text


def _ordered_rungs(individual: Individual) -> list[RungExpression]:
    last: dict[tuple[OutputSignal, Mode], RungExpression] = {}
    for rung in decode(individual):
        last[(rung.target, rung.mode)] = rung
    return sorted(last.values(),
                  key=lambda r: (_MODE_ORDER[r.mode], r.target.index))


def _provenance(individual: Individual, seed=None, objectives=None) -> tuple[str, ...]:
    header = [f"individual: id={individual.id} generation={individual.generation_born}"]
    if seed is not None:
        header.append(f"seed: {seed}")
    if objectives is not None:
        header.append("objectives: f1={} f2={} f3={}".format(
            objectives.f1_transport, objectives.f2_energy, objectives.f3_code))
    return tuple(header)


def emit_structured_text(individual: Individual, *, seed=None,
                         objectives=None) -> StructuredTextProgram:
    """One assignment per rung in canonical order.

    Manual rungs are guarded with ``IF NOT B1``; automatic rungs get an
    ``IF B1`` guard only when their condition does not already imply B1, so
    programs that gate themselves on the mode switch are not double-gated.
    """
    statements = []
    for rung in _ordered_rungs(individual):
        if rung.mode is Mode.AUTOMATIC:
            # guard only when the condition can fire with B1 low
            guarded = bool(rung.table() & _NOT_B1)
        else:
            guarded = True
        expression = "FALSE" if rung.expr is None else _render_expr(rung.expr)
        statements.append(StStatement(rung.target, rung.mode, expression,
                                      guarded and rung.expr is not None,
                                      rung.implicit))
    header = ("structured text export",) + _provenance(individual, seed, objectives)
    return StructuredTextProgram(header, tuple(statements))


# --- instruction list -----------------------------------------------------------

_IL_FIRST = {False: "LD", True: "LDN"}
_IL_CONT = {
    (Operator.AND, False): "AND",
    (Operator.AND, True): "ANDN",
    (Operator.OR, False): "OR",
    (Operator.OR, True): "ORN",
}


def emit_instruction_list(individual: Individual, *, seed=None,
                          objectives=None) -> str:
    """Accumulator mnemonics, one line per genome row plus a store per rung."""
    rungs = [list(individual.rows[a:b])
             for a, b in rung_slices(resolve_priority(individual).rows)]
    rungs.sort(key=lambda r: (_MODE_ORDER[r[0].mode], r[0].output.index))
    lines = [f"(* {h} *)" for h in
             ("instruction list export",) + _provenance(individual, seed, objectives)]
    assigned = set()
    for rung in rungs:
        opener = rung[0]
        assigned.add(opener.output)
        lines.append(f"(* rung {opener.output.value} mode {opener.mode.value} *)")
        lines.append(f"{_IL_FIRST[opener.negated]} {opener.input.value}")
        for row in rung[1:]:
            lines.append(f"{_IL_CONT[(row.operator, row.negated)]} {row.input.value}")
        lines.append(f"ST {opener.output.value}")
    missing = [out.value for out in OUTPUTS if out not in assigned]
    if missing:
        lines.append(f"(* implicit false: {', '.join(missing)} *)")
    return "\n".join(lines) + "\n"


# --- structured text parser -----------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\(\*.*?\*\)|:=|;|\(|\)|[A-Za-z_][A-Za-z0-9_]*)", re.S)


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if rest:
                raise ValueError(f"cannot tokenize structured text at {rest[:20]!r}")
            break
        pos = m.end()
        tok = m.group(1)
        if not tok.startswith("(*"):
            tokens.append(tok)
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of structured text")
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def parse_program(self) -> list[RungExpression]:
        rungs = []
        while self.peek() is not None:
            rungs.extend(self.parse_statement())
        return rungs

    def parse_statement(self) -> list[RungExpression]:
        if self.peek() == "IF":
            self.take("IF")
            mode = Mode.AUTOMATIC
            if self.peek() == "NOT":
                self.take("NOT")
                mode = Mode.MANUAL
            self.take("B1")
            self.take("THEN")
            body = []
            while self.peek() != "END_IF":
                body.append(self.parse_assignment(mode))
            self.take("END_IF")
            if self.peek() == ";":
                self.take(";")
            return body
        return [self.parse_assignment(Mode.AUTOMATIC)]

    def parse_assignment(self, mode: Mode) -> RungExpression:
        target = OutputSignal(self.take())
        self.take(":=")
        expr = self.parse_expr()
        self.take(";")
        return RungExpression(target, mode, expr, implicit=expr is None)

    def parse_expr(self):
        node = self.parse_and()
        while self.peek() == "OR":
            self.take("OR")
            right = self.parse_and()
            node = self._join(Operator.OR, node, right)
        return node

    def parse_and(self):
        node = self.parse_unary()
        while self.peek() == "AND":
            self.take("AND")
            right = self.parse_unary()
            node = self._join(Operator.AND, node, right)
        return node

    @staticmethod
    def _join(op: Operator, left, right):
        if left is None or right is None:
            # FALSE absorbs or vanishes depending on the operator
            if op is Operator.AND:
                return None
            return left if right is None else right
        return BoolOp(op, left, right)

    def parse_unary(self):
        if self.peek() == "NOT":
            self.take("NOT")
            atom = self.parse_atom()
            if not isinstance(atom, Literal) or atom.negated:
                raise ValueError("NOT applies to a plain input literal only")
            return Literal(atom.signal, True)
        return self.parse_atom()

    def parse_atom(self):
        tok = self.take()
        if tok == "(":
            node = self.parse_expr()
            self.take(")")
            return node
        if tok == "FALSE":
            return None
        return Literal(InputSignal(tok))


def parse_structured_text(text: str) -> list[RungExpression]:
    """Parse emitted structured text back to rung expressions."""
    return _Parser(_tokenize(text)).parse_program()


# --- behavior summary -----------------------------------------------------------


@dataclass(frozen=True)
class SummaryEntry:
    output: OutputSignal
    mode: Mode
    terms: tuple[tuple[tuple[int, bool], ...], ...]
    expression: str
    sentence: str


@dataclass(frozen=True)
class BehaviorSummary:
    header: tuple[str, ...]
    entries: tuple[SummaryEntry, ...]

    @property
    def text(self) -> str:
        lines = [f"(* {h} *)" for h in self.header]
        for e in self.entries:
            lines.append(f"{e.output.value} (mode {e.mode.value}): {e.expression}")
            lines.append(f"  {e.sentence}")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.text


def _term_text(term: tuple[tuple[int, bool], ...]) -> str:
    if not term:
        return "TRUE"
    parts = []
    for index, positive in term:
        name = list(InputSignal)[index].value
        parts.append(name if positive else f"NOT {name}")
    return " AND ".join(parts)


_SENSOR_INDICES = {s.index for s in (InputSignal.S1, InputSignal.S2, InputSignal.S3)}


def _literal_phrase(index: int, positive: bool) -> str:
    name = list(InputSignal)[index].value
    if index in _SENSOR_INDICES:
        return f"level is {'at or above' if positive else 'below'} {name}"
    return f"{name} is {'on' if positive else 'off'}"


def _term_phrase(term: tuple[tuple[int, bool], ...]) -> str:
    # switches and buttons first, then level sensors: reads more naturally
    ordered = sorted(term, key=lambda lit: (lit[0] in _SENSOR_INDICES, lit[0]))
    return " and ".join(_literal_phrase(i, pos) for i, pos in ordered)


def _sentence(output: OutputSignal, terms) -> str:
    verb = "is on" if output is OutputSignal.L1 else "runs"
    if terms == ():
        return f"{output.value} is never active."
    if terms == ((),):
        return f"{output.value} is always active."
    if len(terms) == 1:
        return f"{output.value} {verb} when {_term_phrase(terms[0])}."
    clauses = " or ".join(f"({_term_phrase(t)})" for t in terms)
    return f"{output.value} {verb} when {clauses}."


def derive_behavior_summary(individual: Individual) -> BehaviorSummary:
    """Exact minimized sum-of-products plus an English line per rung."""
    entries = []
    for rung in _ordered_rungs(individual):
        terms = truthtab.minimize_table(rung.table())
        if terms == ():
            expression = "FALSE"
        elif terms == ((),):
            expression = "TRUE"
        else:
            expression = " OR ".join(_term_text(t) for t in terms)
        entries.append(SummaryEntry(rung.target, rung.mode, terms, expression,
                                    _sentence(rung.target, terms)))
    header = ("behavior summary",) + _provenance(individual)
    return BehaviorSummary(header, tuple(entries))
