#!/usr/bin/env python3
"""Plot netbreak CSV output: compare files (bound vs simulation over epsilon)
or sweep-lambda files (bound vs lambda, one line per epsilon).

Needs matplotlib; the library itself does not."""

import argparse
import csv
import sys


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", nargs="+", help="compare or sweep-lambda output")
    parser.add_argument("--out", required=True, help="image file, e.g. fig.png")
    args = parser.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for path in args.csv:
        rows = read_rows(path)
        if not rows:
            continue
        if "lambda" in rows[0]:
            by_eps = {}
            for r in rows:
                by_eps.setdefault(r["epsilon"], []).append((int(r["lambda"]), float(r["p_upper"])))
            for eps, pts in sorted(by_eps.items()):
                ax.plot(*zip(*pts), marker="o", label=f"bound, eps={eps}")
            ax.set_xlabel("lambda")
        else:
            eps = [float(r["epsilon"]) for r in rows]
            ax.plot(eps, [float(r["p_upper"]) for r in rows], label=f"bound ({path})")
            if "mean" in rows[0]:
                ax.errorbar(eps, [float(r["mean"]) for r in rows],
                            yerr=[3 * float(r["stderr"]) for r in rows],
                            fmt="o", label=f"simulation ({path})")
            ax.set_xlabel("epsilon")
    ax.set_yscale("log")
    ax.set_ylabel("breakdown probability")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
