"""Randomized agreement and scaling experiments.

Each experiment takes a frozen config dataclass and returns a result
dataclass with raw tallies, so scripts can print them and tests can assert
on them.  All randomness flows from ``config.seed``.
"""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import circuit, engine, oracle
from .field import FieldTag
from .grammar import Grammar, binary_rule, terminal_rule
from .randgen import grammar_pair, random_cnf


@dataclass(frozen=True)
class AgreementConfig:
    trials: int = 1000
    max_n: int = 8
    letters: int = 3
    max_rules: int = 12
    rounds: int = engine.DEFAULT_ROUNDS
    seed: int = 0
    prefix: bool = False  # compare all lengths 1..n instead of exactly n


@dataclass
class AgreementResult:
    trials: int = 0
    agree: int = 0
    oracle_equal: int = 0
    oracle_equal_nonempty: int = 0
    false_not_equal: int = 0
    false_equal: int = 0
    kinds: Counter = field(default_factory=Counter)
    seconds: float = 0.0

    @property
    def rate(self) -> float:
        return self.agree / self.trials if self.trials else 0.0


def _unambiguous_upto(g: Grammar, lengths) -> bool:
    return all(oracle.slice_unambiguous(g, k) for k in lengths)


def oracle_agreement(cfg: AgreementConfig) -> AgreementResult:
    """Randomized equivalence verdicts against exact enumeration.

    Only pairs whose relevant slices are unambiguous (by the oracle) count as
    trials.
    """
    rng = random.Random(cfg.seed)
    res = AgreementResult()
    start = time.perf_counter()
    while res.trials < cfg.trials:
        n = rng.randint(1, cfg.max_n)
        lengths = list(range(1, n + 1)) if cfg.prefix else [n]
        g1, g2, kind = grammar_pair(rng, n, cfg.letters, cfg.max_rules, lengths=lengths)
        if not (_unambiguous_upto(g1, lengths) and _unambiguous_upto(g2, lengths)):
            continue
        if cfg.prefix:
            exact = oracle.exact_equal_upto(g1, g2, n)
            verdict = engine.bounded_equivalence(g1, g2, n, cfg.rounds, rng.getrandbits(64))
        else:
            exact = oracle.exact_slice_equal(g1, g2, n)
            verdict = engine.slice_equivalence(g1, g2, n, cfg.rounds, rng.getrandbits(64))
        said_equal = verdict.outcome is engine.Outcome.EQUAL_WHP
        res.trials += 1
        res.kinds[kind] += 1
        res.agree += said_equal == exact
        res.oracle_equal += exact
        if exact and any(len(oracle.enumerate_slice(g1, k)) for k in lengths):
            res.oracle_equal_nonempty += 1
        res.false_not_equal += exact and not said_equal
        res.false_equal += said_equal and not exact
    res.seconds = time.perf_counter() - start
    return res


@dataclass(frozen=True)
class ParseConfig:
    grammars: int = 50
    words_per_grammar: int = 10
    max_len: int = 8
    letters: int = 3
    max_rules: int = 12
    seed: int = 1


@dataclass
class ParseResult:
    pairs: int = 0
    agree: int = 0
    members: int = 0


def parse_agreement(cfg: ParseConfig) -> ParseResult:
    """Word-like evaluation against boolean CYK.

    Half of the words are drawn from the grammar's own slice so members are
    well represented.  A grammar is kept only if it is unambiguous on every
    length up to ``max_len``.
    """
    rng = random.Random(cfg.seed)
    res = ParseResult()
    kept = 0
    lengths = range(1, cfg.max_len + 1)
    while kept < cfg.grammars:
        g = random_cnf(rng, rng.randint(1, cfg.letters), rng.randint(1, 4), cfg.max_rules)
        if not _unambiguous_upto(g, lengths):
            continue
        slices = {k: oracle.enumerate_slice(g, k).words for k in lengths}
        if not any(slices.values()):
            continue
        kept += 1
        for _ in range(cfg.words_per_grammar):
            k = rng.choice([k for k in lengths if slices[k]]) if rng.random() < 0.5 else rng.choice(lengths)
            if slices[k] and rng.random() < 0.5:
                w = rng.choice(slices[k])
            else:
                w = tuple(rng.choice(g.alphabet) for _ in range(k))
            expected = oracle.cyk_member(g, w)
            res.pairs += 1
            res.members += expected
            res.agree += engine.parse_membership(g, w) == expected
    return res


@dataclass(frozen=True)
class ParityConfig:
    grammars: int = 500
    max_n: int = 6
    letters: int = 3
    max_rules: int = 12
    rounds: int = engine.DEFAULT_ROUNDS
    seed: int = 2


@dataclass
class ParityResult:
    trials: int = 0
    agree: int = 0
    nonempty: int = 0
    false_nonempty: int = 0
    cancelled: int = 0  # non-empty slice whose every word has an even count


def parity_agreement(cfg: ParityConfig) -> ParityResult:
    rng = random.Random(cfg.seed)
    res = ParityResult()
    for _ in range(cfg.grammars):
        g = random_cnf(rng, rng.randint(1, cfg.letters), rng.randint(1, 4), cfg.max_rules)
        n = rng.randint(1, cfg.max_n)
        counts = oracle.slice_counts(g, n)
        exact = any(c % 2 for c in counts.values())
        v = engine.gf2_slice_empty(g, n, cfg.rounds, rng.getrandbits(64))
        said_nonempty = v.outcome is engine.Outcome.NONEMPTY
        res.trials += 1
        res.agree += said_nonempty == exact
        res.nonempty += exact
        res.false_nonempty += said_nonempty and not exact
        res.cancelled += bool(counts) and not exact
    return res


@dataclass(frozen=True)
class NullConfig:
    grammars: int = 200
    points_per_grammar: int = 3
    max_n: int = 10
    seed: int = 3


def null_like_annihilation(cfg: NullConfig) -> tuple[int, int]:
    """Returns (evaluations, how many of them were zero)."""
    rng = random.Random(cfg.seed)
    nrng = np.random.default_rng(cfg.seed)
    total = zeros = 0
    for _ in range(cfg.grammars):
        g = random_cnf(rng, rng.randint(1, 3), rng.randint(1, 5), 12)
        n = rng.randint(1, cfg.max_n)
        for _ in range(cfg.points_per_grammar):
            x = engine.random_assignment(nrng, FieldTag.P61, g.alphabet, n)
            values = np.array(x.values)
            values[:, rng.randrange(n)] = 0
            point = engine.Assignment(FieldTag.P61, x.alphabet, values)
            assert point.is_null_like()
            total += 1
            zeros += engine.evaluate_slice(g, n, point).value.value == 0
    return total, zeros


@dataclass(frozen=True)
class CountConfig:
    cases: int = 50
    max_n: int = 48
    seed: int = 4


def mul_count_matches(cfg: CountConfig) -> tuple[int, int]:
    """Returns (cases, cases where the counter equals the closed form)."""
    rng = random.Random(cfg.seed)
    nrng = np.random.default_rng(cfg.seed)
    ok = 0
    for _ in range(cfg.cases):
        g = random_cnf(rng, rng.randint(1, 3), rng.randint(1, 6), 16)
        n = rng.randint(1, cfg.max_n)
        x = engine.random_assignment(nrng, FieldTag.P61, g.alphabet, n)
        ok += engine.evaluate_slice(g, n, x).mul_count == engine.closed_form_mul_count(g, n)
    return cfg.cases, ok


def sigma_star(letters: str, right: bool) -> Grammar:
    """All non-empty words over ``letters``, branching right or left (unambiguous)."""
    rules = [terminal_rule("S", a) for a in letters] + [terminal_rule(f"T{a}", a) for a in letters]
    for a in letters:
        rules.append(binary_rule("S", f"T{a}", "S") if right else binary_rule("S", "S", f"T{a}"))
    return Grammar("S", tuple(rules), tuple(letters))


@dataclass(frozen=True)
class ScalingConfig:
    sizes: tuple[int, ...] = (64, 128, 256)
    repeats: int = 3
    letters: str = "abc"
    seed: int = 5


@dataclass
class ScalingResult:
    sizes: tuple[int, ...]
    seconds: list[float]
    mul_counts: list[int]

    @property
    def ratios(self) -> list[float]:
        return [b / a for a, b in zip(self.seconds, self.seconds[1:])]


def scaling(cfg: ScalingConfig, g: Grammar | None = None) -> ScalingResult:
    """Best-of-``repeats`` wall time of one slice evaluation per size.

    Repeats cycle through all sizes so a burst of machine noise hits every
    size rather than inflating one of them.
    """
    g = g or sigma_star(cfg.letters, right=True)
    nrng = np.random.default_rng(cfg.seed)
    points = {n: engine.random_assignment(nrng, FieldTag.P61, g.alphabet, n) for n in cfg.sizes}
    best = {n: float("inf") for n in cfg.sizes}
    counts = {}
    for _ in range(cfg.repeats):
        for n in cfg.sizes:
            t0 = time.perf_counter()
            value = engine.evaluate_slice(g, n, points[n])
            best[n] = min(best[n], time.perf_counter() - t0)
            counts[n] = value.mul_count
    return ScalingResult(tuple(cfg.sizes), [best[n] for n in cfg.sizes], [counts[n] for n in cfg.sizes])


@dataclass
class HeadToHead:
    n: int
    oracle_outcome: str
    engine_equal: engine.Verdict
    engine_unequal: engine.Verdict
    engine_seconds: float


def head_to_head(n: int = 20, letters: str = "abc", seed: int = 0) -> HeadToHead:
    """Exact enumeration versus the randomized test where |Σ|^n is out of reach."""
    right, left = sigma_star(letters, True), sigma_star(letters, False)
    try:
        oracle.exact_slice_equal(right, left, n)
        oracle_outcome = "completed"
    except oracle.BudgetExceeded:
        oracle_outcome = "budget exceeded"
    # without S -> S T<last>, no word longer than one letter ends in the last letter
    drop = binary_rule("S", "S", f"T{letters[-1]}")
    broken = Grammar("S", tuple(r for r in left.rules if r != drop), left.alphabet)
    t0 = time.perf_counter()
    eq = engine.slice_equivalence(right, left, n, seed=seed)
    seconds = time.perf_counter() - t0
    ne = engine.slice_equivalence(right, broken, n, seed=seed)
    return HeadToHead(n, oracle_outcome, eq, ne, seconds)


@dataclass(frozen=True)
class CircuitConfig:
    grammars: int = 100
    inputs_per_grammar: int = 200
    monotone_pairs: int = 1000
    max_n: int = 6
    seed: int = 6


@dataclass
class CircuitResult:
    dp_checks: int = 0
    dp_agree: int = 0
    word_checks: int = 0
    word_agree: int = 0
    monotone_checks: int = 0
    monotone_ok: int = 0


def circuit_suites(cfg: CircuitConfig) -> CircuitResult:
    rng = random.Random(cfg.seed)
    res = CircuitResult()

    def variables(g, n):
        return [(a, i) for i in range(1, n + 1) for a in g.alphabet]

    for _ in range(cfg.grammars):
        g = random_cnf(rng, rng.randint(1, 2), rng.randint(1, 4), 10)
        n = rng.randint(1, cfg.max_n)
        c = circuit.extract_circuit(g, n)
        vs = variables(g, n)
        for _ in range(cfg.inputs_per_grammar):
            x = {v: rng.random() < 0.5 for v in vs}
            res.dp_checks += 1
            res.dp_agree += circuit.eval_circuit(c, x) == circuit.boolean_slice_value(g, n, x)
        words = set(oracle.enumerate_slice(g, n))
        for w in itertools.product(g.alphabet, repeat=n):
            x = {(a, i): w[i - 1] == a for a, i in vs}
            res.word_checks += 1
            res.word_agree += circuit.eval_circuit(c, x) == (w in words)
    while res.monotone_checks < cfg.monotone_pairs:
        g = random_cnf(rng, rng.randint(1, 3), rng.randint(1, 4), 10)
        n = rng.randint(1, cfg.max_n)
        c = circuit.extract_circuit(g, n)
        for _ in range(20):
            u = {v: rng.random() < 0.3 for v in variables(g, n)}
            w = {v: b or rng.random() < 0.3 for v, b in u.items()}
            res.monotone_checks += 1
            res.monotone_ok += circuit.eval_circuit(c, u) <= circuit.eval_circuit(c, w)
    return res
