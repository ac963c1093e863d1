"""Randomized verdicts against the brute-force oracle.

    python scripts/agreement.py slice --trials 1000 --seed 0
    python scripts/agreement.py prefix --max-n 8
    python scripts/agreement.py parse
    python scripts/agreement.py parity --grammars 500
"""

import argparse
import dataclasses

from cyksz import experiments as E

CONFIGS = {
    "slice": (E.AgreementConfig, E.oracle_agreement),
    "prefix": (E.AgreementConfig, E.oracle_agreement),
    "parse": (E.ParseConfig, E.parse_agreement),
    "parity": (E.ParityConfig, E.parity_agreement),
}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("experiment", choices=sorted(CONFIGS))
    args, rest = p.parse_known_args()
    config_cls, run = CONFIGS[args.experiment]
    # every int field of the config becomes a --flag
    sub = argparse.ArgumentParser(prog=f"agreement.py {args.experiment}")
    for f in dataclasses.fields(config_cls):
        if f.type in (int, "int"):
            sub.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    overrides = vars(sub.parse_args(rest))
    if args.experiment == "prefix":
        overrides["prefix"] = True
    cfg = config_cls(**overrides)
    print(cfg)
    print(run(cfg))


if __name__ == "__main__":
    main()
