"""Monotone boolean circuits for grammar slices.

Replacing (+, *) by (OR, AND) in the span recurrence turns the DP itself into
a circuit over the inputs ``x[a, i]``: one OR gate per live (span,
nonterminal) cell and one AND gate per (binary rule, split point) feeding it.
On a word-like input the circuit answers membership of that word.

Cells whose nonterminal derives no word of the span's length are dropped,
and only cells reachable from the output cell are built.

Text format::

    circuit <num_gates> <output_id>
    g0 INPUT <terminal> <position>
    g1 AND g<a> g<b>
    g2 OR g<a> ... g<k>
    g3 FALSE
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .grammar import Grammar, require_cnf

INPUT, AND, OR, FALSE = "INPUT", "AND", "OR", "FALSE"


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    args: tuple = ()


@dataclass(frozen=True)
class MonotoneCircuit:
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if not self.gates:
            raise CircuitError("a circuit needs at least one gate")
        if not 0 <= self.output < len(self.gates):
            raise CircuitError(f"output g{self.output} does not exist")
        for i, gate in enumerate(self.gates):
            if gate.kind == INPUT:
                if len(gate.args) != 2 or not isinstance(gate.args[1], int) or gate.args[1] < 1:
                    raise CircuitError(f"g{i}: INPUT takes a terminal and a positive position")
            elif gate.kind == AND:
                if len(gate.args) != 2:
                    raise CircuitError(f"g{i}: AND takes exactly two operands")
            elif gate.kind == OR:
                if not gate.args:
                    raise CircuitError(f"g{i}: OR takes at least one operand")
            elif gate.kind == FALSE:
                if gate.args:
                    raise CircuitError(f"g{i}: FALSE takes no operands")
            else:
                raise CircuitError(f"g{i}: unknown gate kind {gate.kind!r}")
            if gate.kind in (AND, OR) and any(not (isinstance(j, int) and 0 <= j < i) for j in gate.args):
                raise CircuitError(f"g{i}: operands must refer to earlier gates")

    @property
    def inputs(self) -> set[tuple[str, int]]:
        return {g.args for g in self.gates if g.kind == INPUT}

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)


def _live_lengths(g: Grammar, n: int) -> dict[int, set[str]]:
    """live[k] = nonterminals deriving at least one word of length k."""
    live = {1: {head for head, _ in g.terminal_rules}}
    for k in range(2, n + 1):
        live[k] = {h for h, d, e in g.binary_rules
                   if any(d in live[s] and e in live[k - s] for s in range(1, k))}
    return live


def extract_circuit(g: Grammar, n: int) -> MonotoneCircuit:
    require_cnf(g)
    if n < 1:
        raise ValueError("slice length must be positive")
    live = _live_lengths(g, n)
    letters = defaultdict(list)
    binaries = defaultdict(list)
    for head, a in g.terminal_rules:
        letters[head].append(a)
    for head, d, e in g.binary_rules:
        binaries[head].append((d, e))

    def children(l: int, k: int, c: str):
        for d, e in binaries[c]:
            for s in range(1, k):
                if d in live[s] and e in live[k - s]:
                    yield (l, s, d), (l + s, k - s, e)

    if g.start not in live[n]:
        return MonotoneCircuit((Gate(FALSE),), 0)

    # cells are (start position, length, nonterminal)
    needed = {(1, n, g.start)}
    frontier = [(1, n, g.start)]
    while frontier:
        cell = frontier.pop()
        if cell[1] > 1:
            for left, right in children(*cell):
                for child in (left, right):
                    if child not in needed:
                        needed.add(child)
                        frontier.append(child)

    gates: list[Gate] = []
    ids: dict = {}

    def emit(key, gate: Gate) -> int:
        ids[key] = len(gates)
        gates.append(gate)
        return ids[key]

    for cell in sorted(needed, key=lambda c: (c[1], c[0], c[2])):
        l, k, c = cell
        operands = []
        if k == 1:
            for a in sorted(letters[c]):
                key = (INPUT, a, l)
                operands.append(ids[key] if key in ids else emit(key, Gate(INPUT, (a, l))))
        else:
            for left, right in children(l, k, c):
                operands.append(emit(None, Gate(AND, (ids[left], ids[right]))))
        emit(cell, Gate(OR, tuple(operands)))
    return MonotoneCircuit(tuple(gates), ids[(1, n, g.start)])


def eval_circuit(c: MonotoneCircuit, inputs: Mapping[tuple[str, int], bool]) -> bool:
    values = []
    for i, gate in enumerate(c.gates):
        if gate.kind == INPUT:
            try:
                values.append(bool(inputs[gate.args]))
            except KeyError:
                raise CircuitError(f"no value for input x[{gate.args[0]}, {gate.args[1]}]") from None
        elif gate.kind == AND:
            values.append(values[gate.args[0]] and values[gate.args[1]])
        elif gate.kind == OR:
            values.append(any(values[j] for j in gate.args))
        else:
            values.append(False)
    return values[c.output]


def export_circuit(c: MonotoneCircuit) -> str:
    lines = [f"circuit {len(c.gates)} {c.output}"]
    for i, gate in enumerate(c.gates):
        if gate.kind == INPUT:
            lines.append(f"g{i} INPUT {gate.args[0]} {gate.args[1]}")
        elif gate.kind == FALSE:
            lines.append(f"g{i} FALSE")
        else:
            lines.append(f"g{i} {gate.kind} " + " ".join(f"g{j}" for j in gate.args))
    return "\n".join(lines) + "\n"


def _gate_ref(tok: str, lineno: int) -> int:
    if not (tok.startswith("g") and tok[1:].isdigit()):
        raise CircuitError(f"line {lineno}: expected a gate reference, got {tok!r}")
    return int(tok[1:])


def import_circuit(text: str) -> MonotoneCircuit:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "circuit" or len(lines[0]) != 3:
        raise CircuitError("line 1: expected 'circuit <num_gates> <output_id>'")
    try:
        num, output = int(lines[0][1]), int(lines[0][2])
    except ValueError:
        raise CircuitError("line 1: gate count and output id must be integers") from None
    if len(lines) - 1 != num:
        raise CircuitError(f"header announces {num} gates but {len(lines) - 1} follow")
    gates = []
    for lineno, parts in enumerate(lines[1:], start=2):
        if len(parts) < 2 or _gate_ref(parts[0], lineno) != len(gates):
            raise CircuitError(f"line {lineno}: gates must be numbered consecutively from g0")
        kind, rest = parts[1], parts[2:]
        if kind == INPUT:
            if len(rest) != 2 or not rest[1].isdigit():
                raise CircuitError(f"line {lineno}: expected 'INPUT <terminal> <position>'")
            gates.append(Gate(INPUT, (rest[0], int(rest[1]))))
        elif kind in (AND, OR, FALSE):
            gates.append(Gate(kind, tuple(_gate_ref(t, lineno) for t in rest)))
        else:
            raise CircuitError(f"line {lineno}: unknown gate kind {kind!r}")
    return MonotoneCircuit(tuple(gates), output)


def boolean_slice_value(g: Grammar, n: int, inputs: Mapping[tuple[str, int], bool]) -> bool:
    """The span recurrence run directly in the (OR, AND) semiring."""
    require_cnf(g)
    # cell[l][k]: nonterminals whose boolean value on span [l, l + k) is true
    cell = [[set() for _ in range(n + 1)] for _ in range(n + 2)]
    for l in range(1, n + 1):
        cell[l][1] = {head for head, a in g.terminal_rules if inputs[(a, l)]}
    for k in range(2, n + 1):
        for l in range(1, n - k + 2):
            for head, d, e in g.binary_rules:
                if head not in cell[l][k] and any(d in cell[l][s] and e in cell[l + s][k - s] for s in range(1, k)):
                    cell[l][k].add(head)
    return g.start in cell[1][n]
