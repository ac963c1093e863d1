"""Random grammars and grammar pairs for experiments and tests.

All functions take a ``random.Random`` so runs are reproducible.  Pair
generators mix pairs with equal slices (same-language rewrites, left- and
right-branching grammars for one finite word set) with near misses, since
independent random grammars almost never agree on a non-empty slice.
"""

from __future__ import annotations

import random
from collections import defaultdict

from .grammar import Grammar, Rule, Terminal, binary_rule, terminal_rule

LETTERS = "abc"
NAMES = ("S", "A", "B", "C", "D", "E")


def random_cnf(rng: random.Random, letters: int = 2, nonterminals: int = 3, max_rules: int = 8) -> Grammar:
    alphabet = LETTERS[:letters]
    names = NAMES[:nonterminals]
    rules = set()
    target = min(rng.randint(2, max_rules), len(names) * (letters + len(names) ** 2))
    while len(rules) < target:
        head = rng.choice(names)
        if rng.random() < 0.4:
            rules.add(terminal_rule(head, rng.choice(alphabet)))
        else:
            rules.add(binary_rule(head, rng.choice(names), rng.choice(names)))
    if not any(r.is_terminal_rule for r in rules):
        rules.remove(min(rules, key=str))
        rules.add(terminal_rule(rng.choice(names), rng.choice(alphabet)))
    return Grammar("S", tuple(rules), tuple(alphabet), names)


def random_general(rng: random.Random, letters: int = 2, nonterminals: int = 3, max_rules: int = 6,
                   max_body: int = 3) -> Grammar:
    """A grammar with ε-bodies, unit rules and long mixed bodies."""
    alphabet = LETTERS[:letters]
    names = NAMES[:nonterminals]
    rules = set()
    target = min(rng.randint(1, max_rules), len(names) * (1 + letters + len(names)))
    while len(rules) < target:
        size = rng.choice([0] + list(range(1, max_body + 1)) * 2)
        body = tuple(Terminal(rng.choice(alphabet)) if rng.random() < 0.4 else rng.choice(names)
                     for _ in range(size))
        rules.add(Rule(rng.choice(names), body))
    return Grammar("S", tuple(rules), tuple(alphabet), names)


def _trie(words, right: bool) -> Grammar:
    """Unambiguous grammar for a finite word set, branching to the right or left."""
    words = {tuple(w) for w in words}
    letters = sorted({a for w in words for a in w})
    proxy = {a: f"T{a}" for a in letters}
    # a node is a prefix (right) or suffix (left) still to be extended by the grammar
    nodes = {(): "S"}
    rules = []
    extend = defaultdict(set)
    for w in words:
        seq = w if right else w[::-1]
        for k in range(len(seq)):
            extend[seq[:k]].add(seq[k])
    for node in sorted(extend, key=lambda p: (len(p), p)):
        head = nodes.setdefault(node, f"N{len(nodes)}")
        for a in sorted(extend[node]):
            nxt = node + (a,)
            whole = nxt if right else nxt[::-1]
            if whole in words:
                rules.append(terminal_rule(head, a))
            if nxt in extend:
                child = nodes.setdefault(nxt, f"N{len(nodes)}")
                rules.append(binary_rule(head, proxy[a], child) if right else binary_rule(head, child, proxy[a]))
    used = {s for r in rules for s in r.body if isinstance(s, str)}
    rules += [terminal_rule(p, a) for a, p in proxy.items() if p in used]
    return Grammar("S", tuple(rules), tuple(letters))


def right_trie(words) -> Grammar:
    return _trie(words, right=True)


def left_trie(words) -> Grammar:
    return _trie(words, right=False)


def rename(g: Grammar, rng: random.Random) -> Grammar:
    names = list(g.nonterminals)
    fresh = [f"N{i}" for i in range(len(names))]
    rng.shuffle(fresh)
    m = dict(zip(names, fresh))
    rules = tuple(Rule(m[r.head], tuple(m.get(s, s) if isinstance(s, str) else s for s in r.body)) for r in g.rules)
    return Grammar(m[g.start], rules, g.alphabet, tuple(fresh))


def _fresh(g: Grammar, base: str) -> str:
    k = 1
    while f"{base}{k}" in g.nonterminals:
        k += 1
    return f"{base}{k}"


def reassociate(g: Grammar, rng: random.Random) -> Grammar | None:
    """Rewrite ``C -> D E, E -> F G`` (E's only rule) into ``C -> H G, H -> D F``.

    Keeps every derivation count.  Returns ``None`` when no rule qualifies.
    """
    by_head = defaultdict(list)
    for r in g.rules:
        by_head[r.head].append(r)
    sole = {h: rs[0] for h, rs in by_head.items() if len(rs) == 1 and rs[0].is_binary_rule}
    options = [r for r in g.rules if r.is_binary_rule and r.body[1] in sole]
    if not options:
        return None
    r = rng.choice(options)
    f, gg = sole[r.body[1]].body
    h = _fresh(g, "H")
    rules = [x for x in g.rules if x != r] + [binary_rule(r.head, h, gg), binary_rule(h, r.body[0], f)]
    return Grammar(g.start, tuple(rules), g.alphabet, g.nonterminals + (h,))


def clone_left(g: Grammar, rng: random.Random) -> Grammar | None:
    """Point one binary rule at a fresh copy of its left child."""
    options = [r for r in g.rules if r.is_binary_rule]
    if not options:
        return None
    r = rng.choice(options)
    d = r.body[0]
    c = _fresh(g, "K")
    copies = [Rule(c, x.body) for x in g.rules if x.head == d]
    rules = [x for x in g.rules if x != r] + [binary_rule(r.head, c, r.body[1])] + copies
    return Grammar(g.start, tuple(rules), g.alphabet, g.nonterminals + (c,))


def mutate(g: Grammar, rng: random.Random) -> Grammar:
    """Add or drop one rule."""
    rules = list(g.rules)
    names = list(g.nonterminals)
    if len(rules) > 1 and rng.random() < 0.5:
        rules.pop(rng.randrange(len(rules)))
    elif rng.random() < 0.5:
        rules.append(terminal_rule(rng.choice(names), rng.choice(g.alphabet)))
    else:
        rules.append(binary_rule(rng.choice(names), rng.choice(names), rng.choice(names)))
    if not any(r.is_terminal_rule for r in rules):
        rules.append(terminal_rule(rng.choice(names), rng.choice(g.alphabet)))
    return Grammar(g.start, tuple(rules), g.alphabet, g.nonterminals)


def random_words(rng: random.Random, letters: int, lengths, count: int) -> set[tuple[str, ...]]:
    alphabet = LETTERS[:letters]
    return {tuple(rng.choice(alphabet) for _ in range(rng.choice(lengths))) for _ in range(count)}


def grammar_pair(rng: random.Random, n: int, letters: int = 3, max_rules: int = 12,
                 lengths=None) -> tuple[Grammar, Grammar, str]:
    """A pair of CNF grammars over the same alphabet plus a label for how it was built.

    ``lengths`` restricts the word lengths used for trie pairs (default: just ``n``).
    """
    lengths = lengths or [n]
    while True:
        kind = rng.choice(["independent", "rewrite", "mutant", "trie", "trie-mutant"])
        k = rng.randint(1, letters)
        if kind.startswith("trie"):
            words = random_words(rng, k, lengths, rng.randint(1, 2))
            g1 = right_trie(words)
            if kind == "trie-mutant":
                words = words ^ random_words(rng, k, lengths, 1)
                if not words:
                    continue
            g2 = left_trie(words)
        else:
            g1 = random_cnf(rng, k, rng.randint(1, 4), max_rules)
            if kind == "independent":
                g2 = random_cnf(rng, k, rng.randint(1, 4), max_rules)
            elif kind == "mutant":
                g2 = mutate(g1, rng)
            else:
                g2 = g1
                for _ in range(rng.randint(1, 3)):
                    step = rng.choice([reassociate, clone_left, rename])(g2, rng)
                    g2 = step if step is not None else g2
        if g1.size > max_rules or g2.size > max_rules:
            continue
        alphabet = tuple(sorted(set(g1.alphabet) | set(g2.alphabet)))
        return g1.with_alphabet(alphabet), g2.with_alphabet(alphabet), kind
