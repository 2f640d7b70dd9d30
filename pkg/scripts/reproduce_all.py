"""Run every reproduce target and the default searches through the CLI.

Exits nonzero if any target does not report PASS or any search finds a violation.
"""
import sys

from canalgeo import cli

RUNS = [
    ["reproduce", "prop-AH", "--n", "3", "--h-range", "80:86"],
    *(["reproduce", "prop-AH", "--n", str(n)] for n in range(4, 9)),
    ["reproduce", "lemma-pyramid"],
    ["reproduce", "prop-eq18", "--h", "100"],
    ["reproduce", "prop-eq18", "--h", "1000"],
    ["reproduce", "lemma-dilation", "--body", "builtin:cube", "--lambdas", "1,2,10,100,1000"],
    ["canal-bounds", "--projection", "builtin:unit-square"],
    ["canal-bounds", "--projection", "builtin:disc-64"],
    ["search", "--check", "ghp", "--trials", "1000", "--seed", "7", "--format", "table"],
    ["search", "--check", "fgm", "--trials", "1000", "--seed", "7", "--format", "table"],
    ["search", "--check", "thmD", "--trials", "200", "--seed", "7", "--format", "table"],
]


def main() -> int:
    worst = 0
    for argv in RUNS:
        print("$ canalgeo " + " ".join(argv), flush=True)
        code = cli.main(argv)
        print(f"exit {code}\n", flush=True)
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
