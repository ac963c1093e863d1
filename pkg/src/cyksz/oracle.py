"""Brute-force ground truth for small grammars.

Everything here is exact: words are enumerated explicitly and derivations are
counted with Python integers.  Costs grow like |Σ|^n, so each slice operation
refuses to run when |Σ|^n exceeds a budget.

Words are sequences of terminal tokens.  A plain string works when every
token is a single character (``"ab"`` is ``('a', 'b')``).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .grammar import Grammar, Terminal, require_cnf

DEFAULT_BUDGET = 10**6

Word = tuple[str, ...]


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SliceSet:
    n: int
    words: tuple[Word, ...]

    def __post_init__(self):
        words = tuple(sorted(set(self.words)))
        if any(len(w) != self.n for w in words):
            raise ValueError(f"all words of a {self.n}-slice must have length {self.n}")
        object.__setattr__(self, "words", words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in set(self.words)

    def __iter__(self):
        return iter(self.words)


def _check_budget(alphabet_size: int, n: int, budget: int) -> None:
    if n < 1:
        raise ValueError("slice length must be positive")
    if alphabet_size**n > budget:
        raise BudgetExceeded(f"|Σ|^n = {alphabet_size}^{n} exceeds the enumeration budget {budget}")


def slice_counts(g: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> dict[Word, int]:
    """Derivation count of every length-``n`` word with at least one derivation."""
    require_cnf(g)
    _check_budget(len(g.alphabet), n, budget)
    terminals = defaultdict(list)
    binaries = defaultdict(list)
    for head, a in g.terminal_rules:
        terminals[head].append(a)
    for head, left, right in g.binary_rules:
        binaries[head].append((left, right))

    @lru_cache(maxsize=None)
    def counts(a: str, length: int) -> dict[Word, int]:
        out: Counter = Counter()
        if length == 1:
            for t in terminals[a]:
                out[(t,)] += 1
            return dict(out)
        for left, right in binaries[a]:
            for m in range(1, length):
                us = counts(left, m)
                if not us:
                    continue
                vs = counts(right, length - m)
                for u, cu in us.items():
                    for v, cv in vs.items():
                        out[u + v] += cu * cv
        return dict(out)

    return counts(g.start, n)


def enumerate_slice(g: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> SliceSet:
    return SliceSet(n, tuple(slice_counts(g, n, budget)))


def count_derivations(g: Grammar, w: Sequence[str]) -> int:
    """Number of parse trees of ``w`` from the start symbol (CYK with exact counts)."""
    require_cnf(g)
    w = tuple(w)
    n = len(w)
    if n < 1:
        raise ValueError("CNF grammars only derive non-empty words")
    # table[(i, j)][A] = derivations of w[i:j] from A
    table: dict[tuple[int, int], Counter] = defaultdict(Counter)
    for i, a in enumerate(w):
        for head, t in g.terminal_rules:
            if t == a:
                table[i, i + 1][head] += 1
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            cell = table[i, j]
            for head, left, right in g.binary_rules:
                for k in range(i + 1, j):
                    cl = table[i, k][left]
                    if cl:
                        cr = table[k, j][right]
                        if cr:
                            cell[head] += cl * cr
    return table[0, n][g.start]


def cyk_member(g: Grammar, w: Sequence[str]) -> bool:
    """Textbook boolean CYK recognizer."""
    require_cnf(g)
    w = tuple(w)
    n = len(w)
    if n == 0:
        return False
    table = [[set() for _ in range(n + 1)] for _ in range(n)]
    for i, a in enumerate(w):
        table[i][1] = {head for head, t in g.terminal_rules if t == a}
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            for split in range(1, length):
                lhs = table[i][split]
                rhs = table[i + split][length - split]
                for head, left, right in g.binary_rules:
                    if left in lhs and right in rhs:
                        table[i][length].add(head)
    return g.start in table[0][n]


def slice_unambiguous(g: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    return all(c <= 1 for c in slice_counts(g, n, budget).values())


def find_ambiguous_word(g: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> tuple[Word, int] | None:
    """The lexicographically first length-``n`` word with several derivations, if any."""
    counts = slice_counts(g, n, budget)
    for w in sorted(counts):
        if counts[w] > 1:
            return w, counts[w]
    return None


def _union_budget(g1: Grammar, g2: Grammar, n: int, budget: int) -> None:
    _check_budget(len(set(g1.alphabet) | set(g2.alphabet)), n, budget)


def exact_slice_equal(g1: Grammar, g2: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    _union_budget(g1, g2, n, budget)
    return enumerate_slice(g1, n, budget).words == enumerate_slice(g2, n, budget).words


def exact_equal_upto(g1: Grammar, g2: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether the languages agree on every length from 1 to ``n``."""
    return all(exact_slice_equal(g1, g2, k, budget) for k in range(1, n + 1))


def gf2_slice_nonempty_exact(g: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether some length-``n`` word has an odd number of derivations."""
    return any(c % 2 for c in slice_counts(g, n, budget).values())


def slice_counts_general(g: Grammar, n: int, budget: int = DEFAULT_BUDGET) -> dict[Word, int]:
    """:func:`slice_counts` for an arbitrary grammar (ε-rules, unit rules, long bodies).

    Lengths are processed in increasing order.  At one length a nonterminal
    may depend on itself through erased siblings or unit rules, so its word
    counts are found by fixpoint iteration: with k nonterminals every finite
    count is reached after k rounds, and an infinite one still grows between
    round k and round 2k.  Infinite counts raise ``ValueError``.
    """
    if n < 0:
        raise ValueError("length must be non-negative")
    if len(g.alphabet) ** n > budget:
        raise BudgetExceeded(f"|Σ|^n = {len(g.alphabet)}^{n} exceeds the enumeration budget {budget}")
    names = sorted(set(g.nonterminals) | {r.head for r in g.rules}
                   | {s for r in g.rules for s in r.body if isinstance(s, str)})
    k = len(names)
    by_head = defaultdict(list)
    for r in g.rules:
        by_head[r.head].append(r.body)
    done: dict[tuple[str, int], dict[Word, int]] = {}

    for length in range(n + 1):
        cur: dict[str, dict[Word, int]] = {a: {} for a in names}

        def words(s, m: int) -> dict[Word, int]:
            if isinstance(s, Terminal):
                return {(s.token,): 1} if m == 1 else {}
            return cur[s] if m == length else done[s, m]

        def seq(body, pos: int, m: int) -> Counter:
            out: Counter = Counter()
            if pos == len(body):
                if m == 0:
                    out[()] = 1
                return out
            for first in range(m + 1):
                heads = words(body[pos], first)
                if not heads:
                    continue
                for tail, ct in seq(body, pos + 1, m - first).items():
                    for u, cu in heads.items():
                        out[u + tail] += cu * ct
            return out

        history = []
        for _ in range(2 * k):
            nxt = {}
            for a in names:
                total: Counter = Counter()
                for body in by_head[a]:
                    total.update(seq(body, 0, length))
                nxt[a] = dict(total)
            cur = nxt
            history.append(cur)
        if history[k - 1] != history[-1]:
            grows = sorted(a for a in names if history[k - 1][a] != history[-1][a])
            raise ValueError(f"infinitely many derivations from {grows} at length {length}")
        for a in names:
            done[a, length] = cur[a]
    return done.get((g.start, n), {})


def count_derivations_general(g: Grammar, w: Sequence[str]) -> int:
    """Derivation count of one word for an arbitrary grammar; see :func:`slice_counts_general`."""
    w = tuple(w)
    return slice_counts_general(g, len(w), budget=max(DEFAULT_BUDGET, len(g.alphabet) ** len(w))).get(w, 0)
