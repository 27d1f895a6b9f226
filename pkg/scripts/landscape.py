"""A_ll(omega, epsilon) at full reflection and the off-surface o-QFI scan.

    python scripts/landscape.py --out results/
"""

import argparse
import math
import pathlib

import numpy as np

from es_qfi.artifacts import write_grid
from es_qfi.optimize import Axis, increases_toward, landscape_all, offsurface_scan
from es_qfi.resonator import SystemParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--n", type=int, default=201)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    omega = Axis("omega", -1.0, 1.0, args.n)
    eps = Axis("epsilon", -1.0, 1.0, args.n)
    for label, phi in (("phi0", 0.0), ("phi_quarter", math.pi / 4)):
        grid = landscape_all(phi, omega, eps)
        write_grid(grid, out / f"landscape_{label}.csv")
        print(f"{label:12s} A_ll range [{np.nanmin(grid.values):.3f}, {np.nanmax(grid.values):.3f}]"
              f"  flagged cells {int(grid.flags.sum())}")

    p = SystemParams(rho=1, phi=math.pi / 4)
    scan = offsurface_scan(p, Axis("epsilon", -0.49, 0.0, 50), "noon", 1)
    write_grid(scan, out / "offsurface_noon.csv")
    print(f"o-QFI(N=1) eps=0: {scan.values[-1]:.2f}  eps=-0.49: {scan.values[0]:.2f}  "
          f"monotone toward -1/2: {increases_toward(scan.axes[0].values, scan.values, -0.5)}")


if __name__ == "__main__":
    main()
