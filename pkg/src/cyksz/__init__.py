"""Randomized limited equivalence for unambiguous CNF grammars."""

from .circuit import MonotoneCircuit, eval_circuit, export_circuit, extract_circuit, import_circuit
from .engine import (
    Assignment,
    EvalTable,
    Outcome,
    Verdict,
    bounded_equivalence,
    evaluate_prefix,
    evaluate_slice,
    gf2_slice_empty,
    parse_membership,
    slice_equivalence,
    word_like_assignment,
)
from .field import FieldElement, FieldTag
from .grammar import Grammar, GrammarError, Rule, Terminal, normalize_to_cnf, parse_grammar, serialize, validate_cnf

__all__ = [
    "Assignment", "EvalTable", "FieldElement", "FieldTag", "Grammar", "GrammarError", "MonotoneCircuit",
    "Outcome", "Rule", "Terminal", "Verdict", "bounded_equivalence", "eval_circuit", "evaluate_prefix",
    "evaluate_slice", "export_circuit", "extract_circuit", "gf2_slice_empty", "import_circuit",
    "normalize_to_cnf", "parse_grammar", "parse_membership", "serialize", "slice_equivalence",
    "validate_cnf", "word_like_assignment",
]
