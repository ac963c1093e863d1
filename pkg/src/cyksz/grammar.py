"""Context-free grammars: representation, text format, CNF checks, normalization.

Nonterminals are plain strings.  Terminals are wrapped in :class:`Terminal`
so that multi-character tokens (``'12'``) and single letters live side by side
with nonterminal names without ambiguity.

Text format::

    # comment
    start S
    S -> A B | 'a'
    A -> 'a'
    B -> 'b'

An optional ``alphabet 'x' 'y' ...`` line declares letters that no rule uses.
In general (non-CNF) mode a body may be any sequence of symbols, and ``ε``
denotes the empty body.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Union


@dataclass(frozen=True, order=True)
class Terminal:
    token: str

    def __str__(self) -> str:
        return f"'{self.token}'"


Symbol = Union[str, Terminal]


@dataclass(frozen=True)
class Rule:
    head: str
    body: tuple[Symbol, ...]

    @property
    def is_terminal_rule(self) -> bool:
        return len(self.body) == 1 and isinstance(self.body[0], Terminal)

    @property
    def is_binary_rule(self) -> bool:
        return len(self.body) == 2 and all(isinstance(s, str) for s in self.body)

    def __str__(self) -> str:
        rhs = " ".join(str(s) for s in self.body) if self.body else "ε"
        return f"{self.head} -> {rhs}"


def terminal_rule(head: str, token: str) -> Rule:
    return Rule(head, (Terminal(token),))


def binary_rule(head: str, left: str, right: str) -> Rule:
    return Rule(head, (left, right))


class GrammarError(ValueError):
    """Raised for malformed grammar text or grammars an operation cannot accept."""

    def __init__(self, message: str, kind: str = "syntax", line: int | None = None, col: int | None = None):
        self.kind = kind
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Grammar:
    """An immutable grammar.  Rules are kept sorted by their text form.

    ``alphabet`` and ``nonterminals`` default to what the rules mention
    (plus the start symbol).  Passing them explicitly lets a grammar declare
    letters with no rules; symbols used by rules but missing from an explicit
    declaration show up as violations in :func:`validate_cnf`.
    """

    start: str
    rules: tuple[Rule, ...]
    alphabet: tuple[str, ...] = None
    nonterminals: tuple[str, ...] = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        rules = tuple(sorted(set(self.rules), key=str))
        object.__setattr__(self, "rules", rules)
        if self.alphabet is None:
            letters = {s.token for r in rules for s in r.body if isinstance(s, Terminal)}
        else:
            letters = set(self.alphabet)
        object.__setattr__(self, "alphabet", tuple(sorted(letters)))
        if self.nonterminals is None:
            names = {self.start} | {r.head for r in rules}
        else:
            names = set(self.nonterminals)
        object.__setattr__(self, "nonterminals", tuple(sorted(names)))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.nonterminals)})

    @property
    def size(self) -> int:
        return len(self.rules)

    @property
    def terminal_rules(self) -> tuple[tuple[str, str], ...]:
        return tuple((r.head, r.body[0].token) for r in self.rules if r.is_terminal_rule)

    @property
    def binary_rules(self) -> tuple[tuple[str, str, str], ...]:
        return tuple((r.head, r.body[0], r.body[1]) for r in self.rules if r.is_binary_rule)

    def index(self, nonterminal: str) -> int:
        return self._index[nonterminal]

    def with_alphabet(self, letters: Iterable[str]) -> Grammar:
        return Grammar(self.start, self.rules, tuple(set(self.alphabet) | set(letters)), self.nonterminals)

    def __str__(self) -> str:
        return serialize(self)


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#.*)
  | (?P<arrow>->)
  | (?P<bar>\|)
  | (?P<quoted>'[^'\s]+')
  | (?P<eps>ε)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize(line: str, lineno: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            if line[pos] == "'":
                raise GrammarError("unterminated or empty terminal token", line=lineno, col=pos + 1)
            raise GrammarError(f"unexpected character {line[pos]!r}", line=lineno, col=pos + 1)
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            out.append((kind, m.group(), pos + 1))
        pos = m.end()
    return out


def parse_grammar(text: str, cnf: bool = True) -> Grammar:
    """Parse grammar text.

    With ``cnf=True`` (the default) every rule must be ``A -> B C`` or
    ``A -> 'a'``; otherwise bodies are arbitrary and ``ε`` is allowed.
    """
    start = None
    alphabet: set[str] = set()
    rules: list[tuple[Rule, int, int]] = []
    seen: set[Rule] = set()

    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        kind, value, col = toks[0]
        if start is None:
            if not (kind == "ident" and value == "start") or len(toks) != 2 or toks[1][0] != "ident":
                raise GrammarError("expected 'start <Nonterminal>' as the first declaration",
                                   kind="missing-start", line=lineno, col=col)
            start = toks[1][1]
            continue
        if kind == "ident" and value == "alphabet" and (len(toks) == 1 or toks[1][0] != "arrow"):
            for k, v, c in toks[1:]:
                if k != "quoted":
                    raise GrammarError("alphabet lists quoted terminals only", line=lineno, col=c)
                alphabet.add(v[1:-1])
            continue
        if kind == "ident" and value == "start" and len(toks) == 2:
            raise GrammarError("duplicate start declaration", line=lineno, col=col)
        if kind != "ident":
            raise GrammarError("rule must begin with a nonterminal", line=lineno, col=col)
        if len(toks) < 2 or toks[1][0] != "arrow":
            col = toks[1][2] if len(toks) > 1 else len(line) + 1
            raise GrammarError("expected '->'", line=lineno, col=col)

        alternatives: list[list[tuple[str, str, int]]] = [[]]
        for tok in toks[2:]:
            if tok[0] == "bar":
                alternatives.append([])
            elif tok[0] == "arrow":
                raise GrammarError("unexpected '->'", line=lineno, col=tok[2])
            else:
                alternatives[-1].append(tok)

        for alt in alternatives:
            body = _body(alt, cnf, lineno, len(line) + 1)
            rule = Rule(value, body)
            if rule in seen:
                raise GrammarError(f"duplicate rule {rule}", kind="duplicate", line=lineno, col=col)
            seen.add(rule)
            rules.append((rule, lineno, col))

    if start is None:
        raise GrammarError("missing start declaration", kind="missing-start")

    heads = {start} | {r.head for r, _, _ in rules}
    for rule, lineno, col in rules:
        for s in rule.body:
            if isinstance(s, str) and s not in heads:
                raise GrammarError(f"undeclared nonterminal {s!r}", kind="undeclared", line=lineno, col=col)
            if isinstance(s, Terminal) and s.token in heads:
                raise GrammarError(f"terminal {s} clashes with a nonterminal name",
                                   kind="undeclared", line=lineno, col=col)
    letters = alphabet | {s.token for r, _, _ in rules for s in r.body if isinstance(s, Terminal)}
    return Grammar(start, tuple(r for r, _, _ in rules), tuple(letters))


def _body(alt, cnf: bool, lineno: int, eol: int) -> tuple[Symbol, ...]:
    if not alt:
        raise GrammarError("empty alternative (ε-rules are not allowed in CNF)" if cnf else "empty alternative",
                           line=lineno, col=eol)
    if any(k == "eps" for k, _, _ in alt):
        if cnf:
            raise GrammarError("ε-rules are not allowed in CNF", kind="not-cnf", line=lineno, col=alt[0][2])
        if len(alt) != 1:
            raise GrammarError("ε must stand alone", line=lineno, col=alt[0][2])
        return ()
    body = tuple(Terminal(v[1:-1]) if k == "quoted" else v for k, v, _ in alt)
    if cnf:
        shape_ok = (len(body) == 1 and isinstance(body[0], Terminal)) or (
            len(body) == 2 and all(isinstance(s, str) for s in body))
        if not shape_ok:
            raise GrammarError("rule is not in Chomsky normal form", kind="not-cnf", line=lineno, col=alt[0][2])
    return body


def serialize(g: Grammar) -> str:
    lines = [f"start {g.start}"]
    used = {s.token for r in g.rules for s in r.body if isinstance(s, Terminal)}
    extra = sorted(set(g.alphabet) - used)
    if extra:
        lines.append("alphabet " + " ".join(f"'{a}'" for a in extra))
    lines.extend(sorted(str(r) for r in g.rules))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    rule: Rule | None = None


def validate_cnf(g: Grammar) -> list[Violation]:
    """Every way ``g`` fails to be a strict CNF grammar; empty iff it is one."""
    out = []
    declared = set(g.nonterminals)
    letters = set(g.alphabet)
    if not letters:
        out.append(Violation("empty-alphabet", "the alphabet is empty"))
    if g.start not in declared:
        out.append(Violation("undeclared-start", f"start symbol {g.start!r} is not declared"))
    for name in sorted(declared & letters):
        out.append(Violation("name-clash", f"{name!r} is both a nonterminal and a terminal"))
    for r in g.rules:
        if not r.body:
            out.append(Violation("epsilon-rule", f"ε-rule {r}", r))
        elif len(r.body) == 1 and isinstance(r.body[0], str):
            out.append(Violation("unit-rule", f"unit rule {r}", r))
        elif len(r.body) > 2:
            out.append(Violation("long-rule", f"body longer than two symbols in {r}", r))
        elif len(r.body) == 2 and not r.is_binary_rule:
            out.append(Violation("mixed-rule", f"terminal inside a binary body in {r}", r))
        if r.head not in declared:
            out.append(Violation("undeclared-nonterminal", f"head {r.head!r} is not declared", r))
        for s in dict.fromkeys(r.body):
            if isinstance(s, str) and s not in declared:
                out.append(Violation("undeclared-nonterminal", f"{s!r} in {r} is not declared", r))
            elif isinstance(s, Terminal) and s.token not in letters:
                out.append(Violation("undeclared-terminal", f"{s} in {r} is not in the alphabet", r))
    return out


class NotCNFError(GrammarError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations), kind="not-cnf")


def require_cnf(g: Grammar) -> None:
    violations = validate_cnf(g)
    if violations:
        raise NotCNFError(violations)


# ---------------------------------------------------------------------------
# normalization

class _FreshNames:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)

    def new(self, hint: str) -> str:
        for i in itertools.count(1):
            name = f"{hint}_{i}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _epsilon_counts(rules: Iterable[Rule], nonterminals: Iterable[str]) -> dict[str, int]:
    """Number of distinct derivations of the empty word from each nonterminal."""
    by_head = defaultdict(list)
    for r in rules:
        by_head[r.head].append(r.body)

    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for head, bodies in by_head.items():
            if head not in nullable and any(all(s in nullable for s in b) for b in bodies):
                nullable.add(head)
                changed = True

    # derivation trees of ε only use bodies made entirely of nullable symbols;
    # any cycle among them can be pumped forever
    succ = {a: {s for b in by_head[a] if all(x in nullable for x in b) for s in b} for a in nullable}
    state: dict[str, int] = {}
    counts: dict[str, int] = {}

    def visit(a: str) -> int:
        if state.get(a) == 1:
            raise GrammarError(f"{a!r} has infinitely many derivations of the empty word", kind="epsilon-cycle")
        if a in counts:
            return counts[a]
        state[a] = 1
        for b in succ[a]:
            visit(b)
        state[a] = 2
        counts[a] = sum(prod(counts[s] for s in body) for body in by_head[a] if all(s in nullable for s in body))
        return counts[a]

    for a in sorted(nullable):
        visit(a)
    return {a: counts.get(a, 0) for a in nonterminals}


def _unit_paths(weights: Counter) -> dict[str, Counter]:
    units = defaultdict(list)
    for r, w in weights.items():
        if len(r.body) == 1 and isinstance(r.body[0], str):
            units[r.head].append((r.body[0], w))

    state: dict[str, int] = {}
    paths: dict[str, Counter] = {}

    def visit(a: str) -> Counter:
        if state.get(a) == 1:
            raise GrammarError(f"unit-rule cycle through {a!r}", kind="unit-cycle")
        if a in paths:
            return paths[a]
        state[a] = 1
        total = Counter({a: 1})
        for b, w in units[a]:
            for c, k in visit(b).items():
                total[c] += w * k
        state[a] = 2
        paths[a] = total
        return total

    heads = sorted({r.head for r in weights})
    for a in heads:
        visit(a)
    return paths


def _prune(start: str, weights: Counter) -> Counter:
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for r in weights:
            if r.head not in productive and all(isinstance(s, Terminal) or s in productive for s in r.body):
                productive.add(r.head)
                changed = True
    live = {r: w for r, w in weights.items() if r.head in productive
            and all(isinstance(s, Terminal) or s in productive for s in r.body)}
    reach = {start}
    frontier = [start]
    while frontier:
        a = frontier.pop()
        for r in live:
            if r.head == a:
                for s in r.body:
                    if isinstance(s, str) and s not in reach:
                        reach.add(s)
                        frontier.append(s)
    return Counter({r: w for r, w in live.items() if r.head in reach})


def normalize_to_cnf(g: Grammar) -> tuple[Grammar, bool]:
    """Convert a general grammar to strict CNF, preserving derivation counts.

    Returns the CNF grammar and whether the empty word belongs to ``L(g)``.
    For every non-empty word the number of derivations is unchanged, so an
    unambiguous input yields an unambiguous output.  Rule multiplicities that
    the conversion would otherwise merge are kept apart with cloned
    nonterminals.

    Raises :class:`GrammarError` on unit-rule cycles, on symbols with
    infinitely many derivations of the empty word, and when the start symbol
    derives some one-letter word in more than one way (a CNF grammar can
    only produce a one-letter word through a single rule).
    """
    if not validate_cnf(g):
        return g, False

    names = _FreshNames(set(g.nonterminals) | set(g.alphabet))
    weights = Counter(g.rules)
    eps = _epsilon_counts(g.rules, g.nonterminals)
    for r in g.rules:
        for s in r.body:
            if isinstance(s, str):
                eps.setdefault(s, 0)

    # drop nullable occurrences, multiplying by their ε-derivation counts
    step = Counter()
    for r, w in weights.items():
        nullable = [i for i, s in enumerate(r.body) if isinstance(s, str) and eps[s] > 0]
        for k in range(len(nullable) + 1):
            for dropped in itertools.combinations(nullable, k):
                kept = tuple(s for i, s in enumerate(r.body) if i not in dropped)
                if kept:
                    step[Rule(r.head, kept)] += w * prod(eps[r.body[i]] for i in dropped)

    # terminals inside longer bodies get proxies; long bodies become chains
    weights, step = step, Counter()
    proxies: dict[str, str] = {}

    def proxy(t: Terminal) -> str:
        if t.token not in proxies:
            hint = "T_" + t.token if re.fullmatch(r"[A-Za-z0-9_]+", t.token) else "T"
            proxies[t.token] = names.new(hint)
            step[terminal_rule(proxies[t.token], t.token)] += 1
        return proxies[t.token]

    for r, w in weights.items():
        if len(r.body) == 1:
            step[r] += w
            continue
        body = [proxy(s) if isinstance(s, Terminal) else s for s in r.body]
        head, mult = r.head, w
        while len(body) > 2:
            rest = names.new(r.head)
            step[Rule(head, (body[0], rest))] += mult
            head, mult, body = rest, 1, body[1:]
        step[Rule(head, tuple(body))] += mult

    # unit rules: fold every unit path into the rules it ends at
    weights = step
    paths = _unit_paths(weights)
    step = Counter()
    for a, reach in paths.items():
        for b, k in reach.items():
            for r, w in weights.items():
                if r.head == b and not (len(r.body) == 1 and isinstance(r.body[0], str)):
                    step[Rule(a, r.body)] += k * w
    weights = _prune(g.start, step)

    weights = _split_heavy_terminals(g.start, weights, names)
    rules = _materialize(weights, names)
    weights = _prune(g.start, Counter(rules))
    return Grammar(g.start, tuple(weights), g.alphabet), eps.get(g.start, 0) > 0


def _split_heavy_terminals(start: str, weights: Counter, names: _FreshNames) -> Counter:
    """Move multiplicities off terminal rules and onto the binary rules above them."""
    heavy = {r.head for r, w in weights.items() if r.is_terminal_rule and w > 1}
    if not heavy:
        return weights
    if start in heavy:
        r = next(r for r, w in weights.items() if r.head == start and r.is_terminal_rule and w > 1)
        raise GrammarError(f"the word {r.body[0]} has {weights[r]} derivations from the start symbol; "
                           "CNF cannot express that", kind="unrepresentable")

    long_name = {h: names.new(h) for h in sorted(heavy)}
    options: dict[str, list[tuple[str, int]]] = {h: [(long_name[h], 1)] for h in heavy}
    out = Counter()
    for r, w in sorted(weights.items(), key=lambda rw: str(rw[0])):
        if r.is_terminal_rule and r.head in heavy:
            leaf = names.new(r.head)
            out[Rule(leaf, r.body)] += 1
            options[r.head].append((leaf, w))
        elif r.is_terminal_rule:
            out[r] += w
    for r, w in weights.items():
        if r.is_binary_rule:
            head = long_name.get(r.head, r.head)
            left, right = r.body
            for x, wx in options.get(left, [(left, 1)]):
                for y, wy in options.get(right, [(right, 1)]):
                    out[Rule(head, (x, y))] += w * wx * wy
    return out


def _materialize(weights: Counter, names: _FreshNames) -> list[Rule]:
    """Turn a weighted rule set into a plain one, cloning left children for multiplicity."""
    rules = []
    clones: list[tuple[str, str]] = []
    for r, w in sorted(weights.items(), key=lambda rw: str(rw[0])):
        if w == 0:
            continue
        rules.append(r)
        if w > 1:
            assert r.is_binary_rule, r
            left, right = r.body
            for _ in range(w - 1):
                c = names.new(left)
                clones.append((c, left))
                rules.append(Rule(r.head, (c, right)))
    by_head = defaultdict(list)
    for r in rules:
        by_head[r.head].append(r.body)
    for c, original in clones:
        rules.extend(Rule(c, body) for body in by_head[original])
    return rules
