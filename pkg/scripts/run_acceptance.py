"""Run the acceptance checks and print one line per criterion.

Usage: python3 scripts/run_acceptance.py [N ...]
"""

import sys

from lamperti import acceptance


def main(argv):
    numbers = [int(a) for a in argv] or None
    failed = 0
    for res in acceptance.run(numbers):
        line = res.line()
        if not res.passed and res.number in acceptance.KNOWN_UNATTAINABLE:
            line += f" [known: {acceptance.KNOWN_UNATTAINABLE[res.number]}]"
        print(line, flush=True)
        failed += not res.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
