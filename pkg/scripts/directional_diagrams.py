"""Write directional diagrams (CSV, degrees) of stiffness and compliance components.

Usage: python scripts/directional_diagrams.py [--out DIR] [--samples N]
"""

import argparse
from pathlib import Path

from lamipolar.cli import diagram_csv
from lamipolar.laminate import homogenize, load_stack
from lamipolar.material import material_library

STACKS = ["data/coupled_isotropic_A.json", "data/qhcl_seq1.json", "data/fabric_pm22.json"]
QUANTITIES = ["A11", "D11", "B11", "B16", "calA11", "calB11", "calB16", "calB61", "EA", "ED"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/diagrams")
    ap.add_argument("--samples", type=int, default=360)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lib = material_library()
    for path in STACKS:
        lt = homogenize(load_stack(path, lib))
        stem = Path(path).stem
        for q in QUANTITIES:
            text = diagram_csv(lt, q, args.samples)
            (out / f"{stem}_{q}.csv").write_text(text)
            vals = [float(line.split(",")[1]) for line in text.splitlines()[1:]]
            print(f"{stem:22s} {q:7s} min {min(vals):+.5e}  max {max(vals):+.5e}")
    print(f"written to {out}/")


if __name__ == "__main__":
    main()
