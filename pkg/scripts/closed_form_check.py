"""Compare every closed-form compliance case with the numeric block inverse.

Instances are built directly from polar parameters that satisfy each case's
hypotheses, with the reference angle swept over a few values.

Usage: python scripts/closed_form_check.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from conftest import closed_form_instances, closed_form_laminate  # noqa: E402
from lamipolar.coupling import compare_special_forms  # noqa: E402


def main():
    refs = (0.0, math.pi / 7, -1.0, 2.5)
    worst = {}
    for case, A, B, D, ply in closed_form_instances(refs):
        for c in compare_special_forms(closed_form_laminate(A, B, D, ply), case):
            key = (case, c.prediction.tensor, c.prediction.param)
            worst[key] = max(worst.get(key, 0.0), c.error)
    width = max(len(k[0]) for k in worst)
    for (case, tensor, param), err in sorted(worst.items()):
        print(f"{case:{width}s}  {tensor:7s} {param:5s}  {err:.2e}")
    print(f"\nworst over all cases: {max(worst.values()):.2e}")


if __name__ == "__main__":
    main()
