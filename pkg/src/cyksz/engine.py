"""Randomized slice equivalence and emptiness via a CYK-shaped polynomial DP.

A language ``K`` of length-``n`` words is encoded as the polynomial

    f(K) = sum over w in K of  x[w_1, 1] * x[w_2, 2] * ... * x[w_n, n]

in variables ``x[a, i]`` (letter ``a`` at position ``i``).  Attaching the
position to each variable makes the commutative monomials spell out words,
so two slices are equal exactly when their polynomials are.  For a CNF
grammar the span values obey

    f[l, l+1)(C) = sum of x[a, l] over rules C -> a
    f[l, r)(C)   = sum over rules C -> D E and l < m < r of f[l, m)(D) * f[m, r)(E)

which we evaluate at a point, in order of increasing span length.  The
polynomial has degree ``n``, so distinct slices give distinct values at a
uniform random point except with probability at most ``n / |F|``.

For an ambiguous grammar the DP sums every derivation, so each word is
weighted by its derivation count (mod p, or mod 2 over GF(2^64)).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .field import FieldElement, FieldTag, arithmetic
from .grammar import Grammar, GrammarError, require_cnf

DEFAULT_ROUNDS = 2
DEFAULT_SEED = 0
_BLOCK_ELEMENTS = 1 << 15


class Outcome(enum.Enum):
    EQUAL_WHP = "EQUAL_WHP"
    NOT_EQUAL = "NOT_EQUAL"
    EMPTY_WHP = "EMPTY_WHP"
    NONEMPTY = "NONEMPTY"


@dataclass(frozen=True)
class Verdict:
    """Result of a randomized test.

    Negative outcomes (``NOT_EQUAL``, ``NONEMPTY``) are certain and carry the
    1-based ``witness_round`` that exposed them (``0`` when decided before any
    round ran).  ``error_bound`` bounds the chance that a positive outcome is
    wrong and is zero for negative ones.
    """

    outcome: Outcome
    rounds: int
    error_bound: Fraction
    witness_round: int | None
    seed: int

    @property
    def positive(self) -> bool:
        return self.outcome in (Outcome.EQUAL_WHP, Outcome.EMPTY_WHP)


@dataclass(frozen=True)
class Assignment:
    """A point: one field value per (letter, position) pair.

    ``values[k, i - 1]`` is the value of ``x[alphabet[k], i]``.
    """

    which: FieldTag
    alphabet: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.uint64)
        if values.ndim != 2 or values.shape[0] != len(self.alphabet):
            raise ValueError("values must have one row per letter")
        if values.shape[1] < 1:
            raise ValueError("an assignment needs at least one position")
        if self.which is FieldTag.P61 and (values >= np.uint64(arithmetic(FieldTag.P61).size)).any():
            raise ValueError("P61 values must be canonical")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, key: tuple[str, int]) -> FieldElement:
        a, i = key
        if not 1 <= i <= self.n:
            raise KeyError(key)
        return FieldElement(self.which, int(self.values[self.alphabet.index(a), i - 1]))

    def is_word_like(self) -> bool:
        v = self.values
        return bool(((v == 0) | (v == 1)).all() and ((v == 1).sum(axis=0) == 1).all())

    def is_null_like(self) -> bool:
        return bool((self.values == 0).all(axis=0).any())

    @classmethod
    def from_mapping(cls, which: FieldTag, alphabet: Sequence[str], n: int, mapping: dict) -> Assignment:
        """Build from ``{(letter, position): int}``; pairs left out are zero."""
        alphabet = tuple(sorted(alphabet))
        values = np.zeros((len(alphabet), n), dtype=np.uint64)
        for (a, i), v in mapping.items():
            values[alphabet.index(a), i - 1] = int(v)
        return cls(which, alphabet, values)


def random_assignment(rng: np.random.Generator, which: FieldTag, alphabet: Sequence[str], n: int) -> Assignment:
    alphabet = tuple(sorted(alphabet))
    return Assignment(which, alphabet, arithmetic(which).sample(rng, (len(alphabet), n)))


def word_like_assignment(g: Grammar, w: Sequence[str], which: FieldTag = FieldTag.P61) -> Assignment:
    w = tuple(w)
    if not w:
        raise ValueError("word must be non-empty")
    values = np.zeros((len(g.alphabet), len(w)), dtype=np.uint64)
    for i, a in enumerate(w):
        try:
            values[g.alphabet.index(a), i] = 1
        except ValueError:
            raise GrammarError(f"letter {a!r} is not in the grammar's alphabet", kind="unknown-letter") from None
    return Assignment(which, g.alphabet, values)


class EvalTable:
    """Values of every span for every nonterminal at one point.

    Stored densely as ``data[l - 1, r - l, C]``, filled by increasing span length.
    ``mul_count`` is the number of field multiplications spent.
    """

    def __init__(self, g: Grammar, data: np.ndarray, which: FieldTag, mul_count: int):
        self.grammar = g
        self.data = data
        self.which = which
        self.mul_count = mul_count

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, key: tuple[int, int, str]) -> FieldElement:
        l, r, c = key
        if not 1 <= l < r <= self.n + 1:
            raise KeyError(key)
        return FieldElement(self.which, int(self.data[l - 1, r - l, self.grammar.index(c)]))


def _check_point(g: Grammar, n: int, point: Assignment) -> np.ndarray:
    if n < 1:
        raise ValueError("slice length must be positive; the empty word is handled outside the DP")
    if point.n != n:
        raise ValueError(f"assignment covers {point.n} positions, expected {n}")
    missing = set(g.alphabet) - set(point.alphabet)
    if missing:
        raise ValueError(f"assignment has no values for letters {sorted(missing)}")
    rows = [point.alphabet.index(a) for a in g.alphabet]
    return point.values[rows]


def fill_table(g: Grammar, n: int, point: Assignment) -> EvalTable:
    require_cnf(g)
    x = _check_point(g, n, point)
    ops = arithmetic(point.which)
    k = len(g.nonterminals)
    data = np.zeros((n, n + 1, k), dtype=np.uint64)

    letter = {a: i for i, a in enumerate(g.alphabet)}
    for head, a in g.terminal_rules:
        c = g.index(head)
        data[:, 1, c] = ops.add(data[:, 1, c], x[letter[a]])

    # rules sorted by head, so each head's rules form one contiguous run
    binaries = sorted(g.binary_rules, key=lambda r: g.index(r[0]))
    heads = [g.index(h) for h, _, _ in binaries]
    starts = np.array([j for j in range(len(heads)) if j == 0 or heads[j] != heads[j - 1]], dtype=np.intp)
    head_cols = np.array([heads[j] for j in starts], dtype=np.intp)
    lefts = np.array([g.index(d) for _, d, _ in binaries], dtype=np.intp)
    rights = np.array([g.index(e) for _, _, e in binaries], dtype=np.intp)
    muls = 0
    if binaries:
        for length in range(2, n + 1):
            count = n - length + 1  # spans of this length
            splits = np.arange(1, length)[None, :]  # length of the left part
            # blocks of spans keep the temporaries cache-sized
            block = max(1, _BLOCK_ELEMENTS // ((length - 1) * len(binaries)))
            for lo in range(0, count, block):
                hi = min(count, lo + block)
                spans = np.arange(lo, hi)[:, None]
                # right part of span l with left length s starts at l + s and has length - s letters
                left = data[lo:hi, 1:length][:, :, lefts]
                right = data[spans + splits, length - splits][:, :, rights]
                prod = ops.mul(left, right)  # (span, split, rule)
                muls += prod.size
                data[lo:hi, length, head_cols] = ops.segment_sum(prod, starts)
    return EvalTable(g, data, point.which, muls)


class SliceValue(NamedTuple):
    value: FieldElement
    mul_count: int


def evaluate_slice(g: Grammar, n: int, point: Assignment) -> SliceValue:
    """Value of f(n-slice of L(g)) at ``point``, with the multiplication count."""
    table = fill_table(g, n, point)
    return SliceValue(table[1, n + 1, g.start], table.mul_count)


def evaluate_prefix(g: Grammar, n: int, point: Assignment) -> SliceValue:
    """Sum of f over the slices of lengths 1..n, all at ``point``.

    Slice ``i`` reads only the first ``i`` positions, so one table for ``n``
    serves every shorter length as well.
    """
    table = fill_table(g, n, point)
    ops = arithmetic(point.which)
    column = table.data[0, 1:, g.index(g.start)]
    return SliceValue(FieldElement(point.which, int(ops.sum(column, axis=0))), table.mul_count)


def closed_form_mul_count(g: Grammar, n: int) -> int:
    """Triples l < m < r in [1, n + 1] times the number of binary rules."""
    triples = (n + 1) * n * (n - 1) // 6
    return triples * len(g.binary_rules)


def round_rng(seed: int, round_index: int) -> np.random.Generator:
    """Independent generator for one round, derived from (seed, round)."""
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), round_index]))


def _error_bound(n: int, which: FieldTag, rounds: int) -> Fraction:
    return Fraction(n, arithmetic(which).size) ** rounds


def _check_rounds(rounds: int) -> None:
    if rounds < 1:
        raise ValueError("rounds must be at least 1")


def _compare(g1: Grammar, g2: Grammar, n: int, rounds: int, seed: int, evaluate) -> Verdict:
    _check_rounds(rounds)
    require_cnf(g1)
    require_cnf(g2)
    alphabet = tuple(sorted(set(g1.alphabet) | set(g2.alphabet)))
    for r in range(1, rounds + 1):
        point = random_assignment(round_rng(seed, r), FieldTag.P61, alphabet, n)
        if evaluate(g1, n, point).value != evaluate(g2, n, point).value:
            return Verdict(Outcome.NOT_EQUAL, rounds, Fraction(0), r, seed)
    return Verdict(Outcome.EQUAL_WHP, rounds, _error_bound(n, FieldTag.P61, rounds), None, seed)


def slice_equivalence(g1: Grammar, g2: Grammar, n: int, rounds: int = DEFAULT_ROUNDS,
                      seed: int = DEFAULT_SEED) -> Verdict:
    """Test whether two unambiguous CNF grammars have the same ``n``-slice.

    Both grammars are evaluated at the same random point each round.
    ``NOT_EQUAL`` is certain; ``EQUAL_WHP`` is wrong with probability at most
    ``(n / p) ** rounds``.
    """
    return _compare(g1, g2, n, rounds, seed, evaluate_slice)


def bounded_equivalence(g1: Grammar, g2: Grammar, n: int, rounds: int = DEFAULT_ROUNDS,
                        seed: int = DEFAULT_SEED, epsilon: tuple[bool, bool] | None = None) -> Verdict:
    """Like :func:`slice_equivalence` but for all lengths 1..n at once.

    ``epsilon`` carries the empty-word flags returned by ``normalize_to_cnf``
    when length 0 should be compared as well.
    """
    _check_rounds(rounds)
    if epsilon is not None and epsilon[0] != epsilon[1]:
        return Verdict(Outcome.NOT_EQUAL, rounds, Fraction(0), 0, seed)
    return _compare(g1, g2, n, rounds, seed, evaluate_prefix)


def parse_membership(g: Grammar, w: Sequence[str]) -> bool:
    """CYK recognition as a special case: evaluate at the word-like point of ``w``.

    The value is the derivation count of ``w`` mod p, so for an ambiguous
    grammar a word with several parses reads as ``False``.
    """
    point = word_like_assignment(g, w, FieldTag.P61)
    return evaluate_slice(g, point.n, point).value.value == 1


def gf2_slice_empty(g: Grammar, n: int, rounds: int = DEFAULT_ROUNDS, seed: int = DEFAULT_SEED) -> Verdict:
    """Test emptiness of the ``n``-slice of ``g`` read as a GF(2)-grammar.

    A word belongs to the GF(2) language when its derivation count is odd.
    The DP runs over GF(2^64), where addition is XOR, so even counts cancel.
    """
    _check_rounds(rounds)
    require_cnf(g)
    for r in range(1, rounds + 1):
        point = random_assignment(round_rng(seed, r), FieldTag.GF2_64, g.alphabet, n)
        if evaluate_slice(g, n, point).value.value != 0:
            return Verdict(Outcome.NONEMPTY, rounds, Fraction(0), r, seed)
    return Verdict(Outcome.EMPTY_WHP, rounds, _error_bound(n, FieldTag.GF2_64, rounds), None, seed)
