#!/usr/bin/env python3
"""Solve an LP file with HiGHS and write `objective <value>`."""

import argparse
import sys

import highspy


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("lp", help="model in CPLEX LP format")
    parser.add_argument("-o", "--out", help="solution file (default: stdout)")
    parser.add_argument("--solver", default="choose", help="HiGHS solver option: choose, simplex, ipm, pdlp")
    parser.add_argument("--time-limit", type=float, default=None, help="seconds")
    args = parser.parse_args()

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("small_matrix_value", 1e-12)
    h.setOptionValue("solver", args.solver)
    if args.time_limit is not None:
        h.setOptionValue("time_limit", args.time_limit)
    if h.readModel(args.lp) == highspy.HighsStatus.kError:
        print(f"cannot read {args.lp}", file=sys.stderr)
        return 2
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print(f"solver status: {h.modelStatusToString(status)}", file=sys.stderr)
        return 1
    line = f"objective {h.getInfo().objective_function_value:.17g}\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(line)
    else:
        sys.stdout.write(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
