"""Coupling-tensor shapes of angle-ply and cross-ply stacks for two kinds of ply.

For square-symmetric (balanced fabric) plies an angle-ply stack gives the
pure shear-extension pattern; for ordinary orthotropic plies the 16 and 26
entries differ and R1 of B does not vanish.

Usage: python scripts/angle_ply_shapes.py
"""

import math

import numpy as np

from lamipolar import Stack, builtin, homogenize
from lamipolar.coupling import shape_classify

STACKS = {
    "angle-ply [30,-30,-30,30,30,-30]": [30, -30, -30, 30, 30, -30],
    "angle-ply [45,-45]": [45, -45],
    "cross-ply [0,90,90,0,0,90]": [0, 90, 90, 0, 0, 90],
}


def main():
    np.set_printoptions(precision=4, suppress=True)
    for mat_name in ("T300-5208", "CE-fabric-gay"):
        mat = builtin(mat_name)
        print(f"== {mat_name}: ply R1/R0 = {mat.polar.R1 / mat.polar.R0:.3g}")
        for label, angles in STACKS.items():
            lt = homogenize(Stack.from_angles(mat, angles))
            p = lt.polar_B
            rep = shape_classify(lt)
            print(f"  {label}: shape {rep.B.value}, R0B = {p.R0:.4g}, R1B = {p.R1:.4g}, "
                  f"Phi0B = {math.degrees(p.Phi0):.4g} deg")
            print("   ", str(np.asarray(lt.B)).replace("\n", "\n    "))


if __name__ == "__main__":
    main()
