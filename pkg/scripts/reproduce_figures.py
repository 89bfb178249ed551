"""Write path data for the six reference parameter sets to a directory.

Usage: python3 scripts/reproduce_figures.py OUT_DIR [--seed N] [--n-paths K]
"""

import argparse
import sys

from lamperti.cli import run


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n-paths", type=int, default=5)
    args = parser.parse_args(argv)
    return run(["--seed", str(args.seed), "--out", args.out_dir, "figures", "--n-paths", str(args.n_paths)])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
