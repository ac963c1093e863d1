"""Wall time and multiplication count of one slice evaluation as n doubles.

    python scripts/scaling.py --sizes 32 64 128 256 --grammar data/grammars/dyck_right.cnf
"""

import argparse
from pathlib import Path

from cyksz import experiments as E
from cyksz.grammar import parse_grammar


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--sizes", type=int, nargs="+", default=list(E.ScalingConfig.sizes))
    p.add_argument("--repeats", type=int, default=E.ScalingConfig.repeats)
    p.add_argument("--grammar", type=Path, help="CNF grammar file (default: all words over a, b, c)")
    args = p.parse_args()
    g = parse_grammar(args.grammar.read_text()) if args.grammar else None
    r = E.scaling(E.ScalingConfig(sizes=tuple(args.sizes), repeats=args.repeats), g)
    print(f"{'n':>6} {'seconds':>10} {'mults':>12} {'ratio':>7}")
    for i, (n, s, m) in enumerate(zip(r.sizes, r.seconds, r.mul_counts)):
        ratio = f"{r.ratios[i - 1]:7.2f}" if i else " " * 7
        print(f"{n:6d} {s:10.4f} {m:12d} {ratio}")


if __name__ == "__main__":
    main()
