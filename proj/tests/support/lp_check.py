"""Solve LP files with HiGHS and report objective and z integrality.

Usage: lp_check.py FILE...
Prints one line per file: "<objective> <max |z - round(z)|>".
Exits with status 3 when highspy is not installed.
"""
import sys

try:
    import highspy
except ImportError:
    sys.exit(3)


def solve(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(path) != highspy.HighsStatus.kOk:
        raise RuntimeError("cannot read " + path)
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        return None, None
    lp = h.getLp()
    values = h.getSolution().col_value
    dev = 0.0
    for name, v in zip(lp.col_names_, values):
        if name.startswith("z"):
            dev = max(dev, abs(v - round(v)))
    return h.getInfo().objective_function_value, dev


def main():
    for path in sys.argv[1:]:
        obj, dev = solve(path)
        if obj is None:
            print("infeasible")
        else:
            print(f"{obj:.9f} {dev:.3e}")


if __name__ == "__main__":
    main()
