#!/usr/bin/env python3
"""Feasibility verdict of an LP file from HiGHS.

Prints Feasible or Infeasible and exits 0, or exits 3 when highspy is missing
and 4 when HiGHS returns anything else.
"""
import sys


def main(argv):
    if len(argv) != 2:
        print("usage: lp_verdict.py FILE.lp", file=sys.stderr)
        return 2
    try:
        import highspy
    except ImportError:
        print("highspy not available", file=sys.stderr)
        return 3
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    # Tight tolerances: the files carry exact integer data and the verdicts
    # of interest sit on boundaries like a gap of exactly one.
    h.setOptionValue("primal_feasibility_tolerance", 1e-9)
    h.setOptionValue("mip_feasibility_tolerance", 1e-9)
    h.setOptionValue("threads", 1)
    h.readModel(argv[1])
    h.run()
    status = h.getModelStatus()
    if status in (highspy.HighsModelStatus.kOptimal,):
        print("Feasible")
        return 0
    if status in (highspy.HighsModelStatus.kInfeasible,):
        print("Infeasible")
        return 0
    print("HiGHS status: " + h.modelStatusToString(status), file=sys.stderr)
    return 4


if __name__ == "__main__":
    sys.exit(main(sys.argv))
