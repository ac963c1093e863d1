import pytest
from hypothesis import HealthCheck, settings

from cyksz.grammar import parse_grammar

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def ab():
    return parse_grammar("start S\nS -> A B\nA -> 'a'\nB -> 'b'")


@pytest.fixture
def ba():
    return parse_grammar("start S\nS -> B A\nA -> 'a'\nB -> 'b'")


@pytest.fixture
def catalan():
    # S -> S S | a: every bracketing of a^n is a separate derivation
    return parse_grammar("start S\nS -> S S | 'a'")


@pytest.fixture
def p3():
    return parse_grammar(P3_TEXT)


P3_TEXT = """\
# the six permutations of 1 2 3
start S
S -> O1 R23 | O2 R13 | O3 R12
R23 -> O2 O3 | O3 O2
R13 -> O1 O3 | O3 O1
R12 -> O1 O2 | O2 O1
O1 -> '1'
O2 -> '2'
O3 -> '3'
"""
