"""Run the stacking-sequence searches stored in data/ and report what they find.

Usage: python scripts/search_demo.py [SPEC.json ...]
"""

import argparse
import time

from lamipolar.laminate import homogenize
from lamipolar.search import load_search_spec, search

DEFAULT_SPECS = ["data/a_isotropy_search.json", "data/qhcl_search.json"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("specs", nargs="*", default=DEFAULT_SPECS)
    args = ap.parse_args()
    for path in args.specs:
        cfg, obj = load_search_spec(path)
        start = time.perf_counter()
        res = search(cfg, obj)
        took = time.perf_counter() - start
        lt = homogenize(res.stack)
        print(f"{path}: converged={res.converged} objective={res.objective:.3e} "
              f"evaluations={res.evaluations} ({took:.2f} s)")
        print(f"  stack {res.angles_deg}")
        print(f"  residuals {res.residuals}")
        print(f"  flags {lt.flags()}")


if __name__ == "__main__":
    main()
