import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyksz.engine import (
    Assignment,
    Outcome,
    bounded_equivalence,
    closed_form_mul_count,
    evaluate_prefix,
    evaluate_slice,
    fill_table,
    gf2_slice_empty,
    parse_membership,
    random_assignment,
    round_rng,
    slice_equivalence,
    word_like_assignment,
)
from cyksz.field import P, FieldElement, FieldTag
from cyksz.grammar import Grammar, GrammarError, NotCNFError, Rule, Terminal, parse_grammar
from cyksz.oracle import cyk_member, enumerate_slice, exact_equal_upto, slice_counts, slice_unambiguous
from cyksz.randgen import random_cnf, random_words, right_trie
from strategies import cnf_grammars

P61 = FieldTag.P61
S_A = parse_grammar("start S\nS -> 'a'")
A_OR_AA = parse_grammar("start S\nS -> 'a' | A A\nA -> 'a'")
A_OR_AAA = parse_grammar("start S\nS -> 'a' | A T\nT -> A A\nA -> 'a'")
EVEN = parse_grammar("start S\nS -> A B | B A\nA -> 'a'\nB -> 'a'")


def point(alphabet, n, mapping, which=P61):
    return Assignment.from_mapping(which, alphabet, n, mapping)


def brute_force_value(g: Grammar, n: int, x: Assignment) -> FieldElement:
    """Sum over the slice of count(w) * prod x[w_i, i], straight from the oracle."""
    total = FieldElement.zero(x.which)
    for w, count in slice_counts(g, n).items():
        term = FieldElement.of(x.which, count % P if x.which is P61 else count % 2)
        for i, a in enumerate(w, start=1):
            term = term * x[a, i]
        total = total + term
    return total


# evaluate_slice


def test_single_letter_value():
    v = 123456789
    assert evaluate_slice(S_A, 1, point("a", 1, {("a", 1): v})).value == FieldElement(P61, v)


def test_ab_value(ab):
    x = point("ab", 2, {("a", 1): 3, ("b", 2): 5, ("a", 2): 11, ("b", 1): 13})
    assert evaluate_slice(ab, 2, x).value.value == 15


@settings(max_examples=200)
@given(cnf_grammars(max_letters=2), st.integers(1, 6), st.integers(0, 2**64 - 1),
       st.sampled_from(list(FieldTag)))
def test_value_matches_brute_force_sum(g, n, seed, which):
    x = random_assignment(np.random.default_rng(seed), which, g.alphabet, n)
    assert evaluate_slice(g, n, x).value == brute_force_value(g, n, x)


@settings(max_examples=100)
@given(cnf_grammars(), st.integers(1, 7), st.integers(0, 2**64 - 1), st.data())
def test_null_like_point_annihilates(g, n, seed, data):
    x = random_assignment(np.random.default_rng(seed), P61, g.alphabet, n)
    values = np.array(x.values)
    values[:, data.draw(st.integers(0, n - 1))] = 0
    null = Assignment(P61, x.alphabet, values)
    assert null.is_null_like()
    assert evaluate_slice(g, n, null).value.value == 0


@settings(max_examples=100)
@given(cnf_grammars(), st.integers(1, 8))
def test_all_ones_counts_words_of_unambiguous_slices(g, n):
    counts = slice_counts(g, n)
    ones = Assignment(P61, g.alphabet, np.ones((len(g.alphabet), n), dtype=np.uint64))
    value = evaluate_slice(g, n, ones).value.value
    assert value == sum(counts.values()) % P
    if slice_unambiguous(g, n):
        assert value == len(counts)


def test_table_entries_follow_the_recurrence(catalan):
    x = random_assignment(np.random.default_rng(5), P61, "a", 6)
    table = fill_table(catalan, 6, x)
    for l in range(1, 7):
        assert table[l, l + 1, "S"] == x["a", l]
    for l, r in itertools.combinations(range(1, 8), 2):
        if r - l > 1:
            expected = FieldElement.zero(P61)
            for m in range(l + 1, r):
                expected = expected + table[l, m, "S"] * table[m, r, "S"]
            assert table[l, r, "S"] == expected


def _prefixed(g: Grammar, tag: str) -> list[Rule]:
    name = lambda s: tag + s if isinstance(s, str) else s  # noqa: E731
    return [Rule(name(r.head), tuple(name(s) for s in r.body)) for r in g.rules]


@pytest.mark.parametrize("seed", range(20))
def test_split_factorization(seed):
    # K has only length-k words, L only length-(n-k) words, so f(KL) = f[1,k+1)(K) * f[k+1,n+1)(L)
    rng = random.Random(seed)
    k, n = rng.randint(1, 3), rng.randint(4, 6)
    gk = right_trie(random_words(rng, 2, [k], 3))
    gl = right_trie(random_words(rng, 2, [n - k], 3))
    cat = Grammar("S", tuple(_prefixed(gk, "K") + _prefixed(gl, "L") + [Rule("S", ("KS", "LS"))]), ("a", "b"))
    assert set(enumerate_slice(cat, n)) == {u + v for u in enumerate_slice(gk, k) for v in enumerate_slice(gl, n - k)}
    x = random_assignment(np.random.default_rng(seed), P61, "ab", n)
    table = fill_table(cat, n, x)
    assert table[1, n + 1, "S"] == table[1, k + 1, "KS"] * table[k + 1, n + 1, "LS"]
    # the left factor is the K-grammar evaluated on its own at the first k positions
    head = Assignment(P61, x.alphabet, x.values[:, :k])
    assert table[1, k + 1, "KS"] == evaluate_slice(gk.with_alphabet("ab"), k, head).value


def test_mul_count_closed_form():
    rng = random.Random(7)
    for _ in range(50):
        g = random_cnf(rng, letters=rng.randint(1, 3), nonterminals=rng.randint(1, 5), max_rules=14)
        n = rng.randint(1, 40)
        x = random_assignment(np.random.default_rng(n), P61, g.alphabet, n)
        assert evaluate_slice(g, n, x).mul_count == closed_form_mul_count(g, n)
        assert closed_form_mul_count(g, n) == sum(
            1 for l, m, r in itertools.combinations(range(1, n + 2), 3)) * len(g.binary_rules)


# evaluate_prefix


def test_prefix_single_letter():
    x = point("a", 3, {("a", 1): 77, ("a", 2): 5, ("a", 3): 9})
    assert evaluate_prefix(S_A, 3, x).value.value == 77


def test_prefix_a_or_aa():
    x = point("a", 2, {("a", 1): 2, ("a", 2): 3})
    assert evaluate_prefix(A_OR_AA, 2, x).value.value == 8


@settings(max_examples=100)
@given(cnf_grammars(), st.integers(0, 2**64 - 1))
def test_prefix_of_length_one_is_the_slice(g, seed):
    x = random_assignment(np.random.default_rng(seed), P61, g.alphabet, 1)
    assert evaluate_prefix(g, 1, x).value == evaluate_slice(g, 1, x).value


@settings(max_examples=100)
@given(cnf_grammars(max_letters=2), st.integers(1, 6), st.integers(0, 2**64 - 1))
def test_prefix_is_the_sum_of_shorter_slices(g, n, seed):
    x = random_assignment(np.random.default_rng(seed), P61, g.alphabet, n)
    expected = FieldElement.zero(P61)
    for i in range(1, n + 1):
        expected = expected + evaluate_slice(g, i, Assignment(P61, x.alphabet, x.values[:, :i])).value
    assert evaluate_prefix(g, n, x).value == expected


# randomized drivers


def test_ab_versus_ba(ab, ba):
    v = slice_equivalence(ab, ba, 2)
    assert v.outcome is Outcome.NOT_EQUAL and v.witness_round == 1 and v.error_bound == 0


@settings(max_examples=50)
@given(cnf_grammars(), st.integers(1, 10), st.integers(0, 2**64 - 1))
def test_grammar_equals_itself(g, n, seed):
    v = slice_equivalence(g, g, n, seed=seed)
    assert v.outcome is Outcome.EQUAL_WHP and v.witness_round is None
    assert v.error_bound == (n / Fraction(P)) ** 2
    assert bounded_equivalence(g, g, n, seed=seed).outcome is Outcome.EQUAL_WHP


def test_bounded_a_versus_a_or_aa():
    assert bounded_equivalence(S_A, A_OR_AA, 2).outcome is Outcome.NOT_EQUAL
    assert not exact_equal_upto(S_A, A_OR_AA, 2)


def test_bounded_equal_below_the_first_difference():
    assert exact_equal_upto(S_A, A_OR_AAA, 2) and not exact_equal_upto(S_A, A_OR_AAA, 3)
    assert bounded_equivalence(S_A, A_OR_AAA, 2).outcome is Outcome.EQUAL_WHP
    assert bounded_equivalence(S_A, A_OR_AAA, 3).outcome is Outcome.NOT_EQUAL
    # the plain slice test sees no difference at length 2 either
    assert slice_equivalence(S_A, A_OR_AAA, 2).outcome is Outcome.EQUAL_WHP


def test_bounded_epsilon_flags():
    v = bounded_equivalence(S_A, S_A, 3, epsilon=(True, False))
    assert v.outcome is Outcome.NOT_EQUAL and v.witness_round == 0
    assert bounded_equivalence(S_A, S_A, 3, epsilon=(True, True)).outcome is Outcome.EQUAL_WHP


def test_alphabets_are_united(ab):
    only_a = parse_grammar("start S\nS -> A A\nA -> 'a'")
    assert slice_equivalence(ab, only_a, 2).outcome is Outcome.NOT_EQUAL
    assert slice_equivalence(ab, ab.with_alphabet("abc"), 2).outcome is Outcome.EQUAL_WHP


@settings(max_examples=50)
@given(cnf_grammars(), cnf_grammars(), st.integers(1, 6), st.integers(0, 2**64 - 1), st.integers(1, 4))
def test_verdicts_are_deterministic(g1, g2, n, seed, rounds):
    assert slice_equivalence(g1, g2, n, rounds, seed) == slice_equivalence(g1, g2, n, rounds, seed)
    assert gf2_slice_empty(g1, n, rounds, seed) == gf2_slice_empty(g1, n, rounds, seed)


def test_round_generators_are_independent_of_order():
    a = round_rng(9, 2).integers(0, 2**63, 4)
    round_rng(9, 1).integers(0, 2**63, 4)
    assert (round_rng(9, 2).integers(0, 2**63, 4) == a).all()
    assert not (round_rng(9, 1).integers(0, 2**63, 4) == a).all()


# word-like points and parsing


def test_word_like_ab(ab):
    x = word_like_assignment(ab, "ab")
    assert [x["a", 1].value, x["b", 2].value, x["b", 1].value, x["a", 2].value] == [1, 1, 0, 0]
    assert x.is_word_like()


def test_word_like_single_letter(ab):
    x = word_like_assignment(ab, "a")
    assert x.n == 1 and x["a", 1].value == 1 and x["b", 1].value == 0


def test_word_like_unknown_letter(ab):
    with pytest.raises(GrammarError) as e:
        word_like_assignment(ab, "ac")
    assert e.value.kind == "unknown-letter"


@settings(max_examples=100)
@given(cnf_grammars(), st.data())
def test_word_like_invariant(g, data):
    w = data.draw(st.lists(st.sampled_from(g.alphabet), min_size=1, max_size=8))
    x = word_like_assignment(g, w)
    assert x.is_word_like() and not x.is_null_like()


def test_parse_examples(ab):
    assert parse_membership(ab, "ab")
    assert not parse_membership(ab, "ba")
    assert not parse_membership(ab, "abab")


@settings(max_examples=100)
@given(cnf_grammars(), st.data())
def test_parse_matches_cyk_on_unambiguous_words(g, data):
    w = tuple(data.draw(st.lists(st.sampled_from(g.alphabet), min_size=1, max_size=7)))
    if slice_unambiguous(g, len(w)):
        assert parse_membership(g, w) == cyk_member(g, w)


def test_parse_on_ambiguous_word_reads_the_count(catalan):
    # "aaa" has two parses, so its value is 2, not 1
    x = word_like_assignment(catalan, "aaa")
    assert evaluate_slice(catalan, 3, x).value.value == 2
    assert not parse_membership(catalan, "aaa")


# GF(2) emptiness


def test_gf2_single_letter():
    v = gf2_slice_empty(S_A, 1)
    assert v.outcome is Outcome.NONEMPTY and v.witness_round == 1


def test_gf2_even_parity_cancels():
    assert len(slice_counts(EVEN, 2)) == 1 and slice_counts(EVEN, 2)[("a", "a")] == 2
    v = gf2_slice_empty(EVEN, 2)
    assert v.outcome is Outcome.EMPTY_WHP
    assert v.error_bound == Fraction(2, 2**64) ** 2


def test_gf2_empty_slice(ab):
    assert gf2_slice_empty(ab, 3).outcome is Outcome.EMPTY_WHP


# errors


def test_zero_length_is_rejected(ab):
    with pytest.raises(ValueError):
        evaluate_slice(ab, 0, point("ab", 1, {}))
    with pytest.raises(ValueError):
        slice_equivalence(ab, ab, 0)


def test_point_must_cover_the_alphabet(ab):
    with pytest.raises(ValueError):
        evaluate_slice(ab, 2, point("a", 2, {("a", 1): 1}))
    with pytest.raises(ValueError):
        evaluate_slice(ab, 2, point("ab", 3, {}))


def test_non_cnf_is_rejected():
    g = Grammar("S", (Rule("S", (Terminal("a"), Terminal("b"))),), ("a", "b"))
    x = point("ab", 2, {})
    with pytest.raises(NotCNFError):
        evaluate_slice(g, 2, x)
    with pytest.raises(NotCNFError):
        slice_equivalence(g, S_A, 2)


def test_rounds_must_be_positive(ab):
    with pytest.raises(ValueError):
        slice_equivalence(ab, ab, 2, rounds=0)


def test_non_canonical_values_are_rejected():
    with pytest.raises(ValueError):
        Assignment(P61, ("a",), np.array([[P]], dtype=np.uint64))
