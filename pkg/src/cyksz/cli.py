"""Command-line front end.

Every subcommand prints one machine-readable line on stdout.  Exit codes:
0 positive verdict, 1 negative verdict, 2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from . import circuit, engine, oracle
from .grammar import GrammarError, normalize_to_cnf, parse_grammar, serialize

EXIT_POSITIVE, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyksz", description="Randomized limited equivalence for CNF grammars.")
    p.add_argument("-v", "--verbose", action="store_true", help="human-readable detail on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def randomized(name, help, pair=True):
        sp = sub.add_parser(name, help=help)
        if pair:
            sp.add_argument("--g1", required=True, type=Path)
            sp.add_argument("--g2", required=True, type=Path)
        else:
            sp.add_argument("--g", required=True, type=Path)
        sp.add_argument("--n", required=True, type=_positive_int)
        sp.add_argument("--rounds", type=_positive_int, default=engine.DEFAULT_ROUNDS)
        sp.add_argument("--seed", type=_seed, default=engine.DEFAULT_SEED)
        return sp

    randomized("eq-slice", "randomized test that two grammars agree on length-n words")
    randomized("eq-upto", "randomized test that two grammars agree on all lengths 1..n")
    randomized("gf2-empty", "randomized emptiness test of the n-slice of a GF(2)-grammar", pair=False)

    sp = sub.add_parser("parse", help="membership of a word via the word-like evaluation")
    sp.add_argument("--g", required=True, type=Path)
    sp.add_argument("--word", required=True, help="space-separated terminal tokens")

    sp = sub.add_parser("extract-circuit", help="monotone circuit for the n-slice")
    sp.add_argument("--g", required=True, type=Path)
    sp.add_argument("--n", required=True, type=_positive_int)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("oracle-check", help="exact slice comparison by enumeration")
    sp.add_argument("--g1", required=True, type=Path)
    sp.add_argument("--g2", required=True, type=Path)
    sp.add_argument("--n", required=True, type=_positive_int)
    sp.add_argument("--budget", type=_positive_int, default=oracle.DEFAULT_BUDGET)

    sp = sub.add_parser("ambiguity-check", help="exact search for a word with several parses")
    sp.add_argument("--g", required=True, type=Path)
    sp.add_argument("--n", required=True, type=_positive_int)
    sp.add_argument("--budget", type=_positive_int, default=oracle.DEFAULT_BUDGET)

    sp = sub.add_parser("normalize", help="convert a general grammar to Chomsky normal form")
    sp.add_argument("--g", required=True, type=Path)
    sp.add_argument("--out", type=Path)
    return p


def _load(path: Path, cnf: bool = True):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    try:
        return parse_grammar(text, cnf=cnf)
    except GrammarError as e:
        raise InputError(f"{path}: {e}") from None


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def _verdict_line(v: engine.Verdict) -> str:
    if v.positive:
        return f"{v.outcome.value} rounds={v.rounds} error<={float(v.error_bound):.3e}"
    return f"{v.outcome.value} round={v.witness_round}"


def _tokens(word) -> str:
    return '"' + " ".join(word) + '"'


def _dispatch(args, out, err) -> int:
    cmd = args.command
    if cmd in ("eq-slice", "eq-upto"):
        g1, g2 = _load(args.g1), _load(args.g2)
        test = engine.slice_equivalence if cmd == "eq-slice" else engine.bounded_equivalence
        v = test(g1, g2, args.n, rounds=args.rounds, seed=args.seed)
        print(_verdict_line(v), file=out)
        if args.verbose:
            print(f"# seed={v.seed} n={args.n} exact error bound={v.error_bound}", file=err)
        return EXIT_POSITIVE if v.positive else EXIT_NEGATIVE

    if cmd == "gf2-empty":
        v = engine.gf2_slice_empty(_load(args.g), args.n, rounds=args.rounds, seed=args.seed)
        print(_verdict_line(v), file=out)
        return EXIT_POSITIVE if v.positive else EXIT_NEGATIVE

    if cmd == "parse":
        g = _load(args.g)
        word = args.word.split()
        if not word:
            raise InputError("--word must contain at least one token")
        try:
            member = engine.parse_membership(g, word)
        except GrammarError as e:
            raise InputError(str(e)) from None
        print("MEMBER" if member else "NOT_MEMBER", file=out)
        return EXIT_POSITIVE if member else EXIT_NEGATIVE

    if cmd == "extract-circuit":
        c = circuit.extract_circuit(_load(args.g), args.n)
        text = circuit.export_circuit(c)
        if args.out is None:
            out.write(text)
        else:
            _write(args.out, text)
            print(f"CIRCUIT gates={len(c.gates)} output=g{c.output}", file=out)
        return EXIT_POSITIVE

    if cmd == "oracle-check":
        g1, g2 = _load(args.g1), _load(args.g2)
        s1 = set(oracle.enumerate_slice(g1, args.n, args.budget))
        s2 = set(oracle.enumerate_slice(g2, args.n, args.budget))
        if s1 == s2:
            print(f"EQUAL words={len(s1)}", file=out)
            return EXIT_POSITIVE
        print(f"NOT_EQUAL word={_tokens(min(s1 ^ s2))}", file=out)
        return EXIT_NEGATIVE

    if cmd == "ambiguity-check":
        found = oracle.find_ambiguous_word(_load(args.g), args.n, args.budget)
        if found is None:
            print("UNAMBIGUOUS", file=out)
            return EXIT_POSITIVE
        print(f"AMBIGUOUS word={_tokens(found[0])} derivations={found[1]}", file=out)
        return EXIT_NEGATIVE

    if cmd == "normalize":
        try:
            g, has_eps = normalize_to_cnf(_load(args.g, cnf=False))
        except GrammarError as e:
            raise InputError(f"{args.g}: {e}") from None
        line = f"CNF rules={g.size} epsilon={'true' if has_eps else 'false'}"
        if args.out is None:
            print(line, file=out)
            out.write(serialize(g))
        else:
            _write(args.out, serialize(g))
            print(line, file=out)
        return EXIT_POSITIVE

    raise AssertionError(cmd)


def run(argv: list[str], stdout=None, stderr=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_USAGE if e.code else 0
    try:
        return _dispatch(args, out, err)
    except (InputError, GrammarError, oracle.BudgetExceeded) as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
