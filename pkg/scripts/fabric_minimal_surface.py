"""Curvatures of the [-22.5, 22.5] fabric laminate under in-plane loads, plus mesh files.

Usage: python scripts/fabric_minimal_surface.py [--out DIR] [--n 41]
"""

import argparse
import json
from pathlib import Path

from lamipolar import LoadCase, Stack, builtin, homogenize, respond, surface_mesh


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/fabric", help="directory for mesh files")
    ap.add_argument("--n", type=int, default=41, help="mesh vertices per side")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    lt = homogenize(Stack.from_angles(builtin("CE-fabric-gay"), [-22.5, 22.5]))
    frame = lt.polar_calB.phi0
    print(f"h = {lt.h} mm, T0 = {lt.polar_A.T0:.6g} MPa, R0 of B = {lt.polar_B.R0:.6g} MPa, "
          f"r0 of calB = {lt.polar_calB.r0:.6g} 1/MPa")
    loads = {
        "shear": LoadCase.membrane(n6=-2.0, Lx=200, Ly=200, frame=frame),
        "stretch": LoadCase.membrane(2.0, -2.0, Lx=200, Ly=200, frame=frame),
        "uniaxial": LoadCase.membrane(2.0, Lx=200, Ly=200, frame=frame),
        "stretch_global_axes": LoadCase.membrane(2.0, -2.0, Lx=200, Ly=200),
    }
    summary = {}
    for name, lc in loads.items():
        rr = respond(lt, lc)
        mesh = surface_mesh(rr, lc, args.n, args.n)
        mesh.to_obj(out / f"{name}.obj")
        mesh.to_csv(out / f"{name}.csv")
        summary[name] = rr.as_dict()
        print(f"{name:20s} kappa = {[f'{k:+.5e}' for k in rr.kappa]}  H = {rr.mean_H:.3g}  "
              f"K = {rr.gaussian_K:.3g}  {rr.mode()}")
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"meshes and summary written to {out}/")


if __name__ == "__main__":
    main()
