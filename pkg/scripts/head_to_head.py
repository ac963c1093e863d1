"""Exact enumeration versus the randomized test on all words over a few letters.

    python scripts/head_to_head.py --n 20 --letters abc
"""

import argparse

from cyksz import experiments as E


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--letters", default="abc")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    h = E.head_to_head(args.n, args.letters, args.seed)
    print(f"words of length {args.n}: {len(args.letters)}^{args.n} = {len(args.letters) ** args.n}")
    print(f"oracle: {h.oracle_outcome}")
    print(f"engine, right vs left branching: {h.engine_equal.outcome.value} "
          f"(error <= {float(h.engine_equal.error_bound):.3e}) in {h.engine_seconds * 1e3:.1f} ms")
    print(f"engine, against a mutant: {h.engine_unequal.outcome.value} at round {h.engine_unequal.witness_round}")


if __name__ == "__main__":
    main()
