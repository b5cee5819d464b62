"""Check the five 18-ply quasi-homogeneous coupled sequences over (0, 60, -60) orientations.

Usage: python scripts/verify_qhcl_sequences.py [--material NAME] [--rotation DEG]
"""

import argparse
import json

import numpy as np

from lamipolar import Stack, homogenize, verify_known_sequences
from lamipolar.material import material_library
from lamipolar.search import KNOWN_QHCL, sequence_angles


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--material", default="T300-5208")
    ap.add_argument("--materials", help="extra materials JSON file")
    ap.add_argument("--rotation", type=float, default=0.0, help="rotate every ply by this many degrees")
    args = ap.parse_args()
    mat = material_library(args.materials)[args.material]
    rep = verify_known_sequences(mat, args.rotation)
    print(json.dumps(rep.as_dict(), indent=2))
    print("\nper-sequence norms (B and calA differ, A and D do not):")
    for seq in KNOWN_QHCL:
        lt = homogenize(Stack.from_angles(mat, [a + args.rotation for a in sequence_angles(seq)]))
        print(f"  {seq}  |A| = {np.linalg.norm(np.asarray(lt.A)):.6f}  |B| = {np.linalg.norm(np.asarray(lt.B)):.6f}"
              f"  |calA| = {np.linalg.norm(np.asarray(lt.calA)):.6e}")


if __name__ == "__main__":
    main()
