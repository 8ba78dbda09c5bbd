"""Default 20^3 shear sweep plus the c1 = 0 curve, written as CSV tables."""

import argparse
from pathlib import Path

import numpy as np

from neutral_lame.cli_io.records import write_csv
from neutral_lame.neutrality_lab import SweepGrid, c1_zero_curve, shear_infeasibility_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("out"))
    args = ap.parse_args()

    grid = SweepGrid()
    rep = shear_infeasibility_sweep(grid)
    write_csv(args.out / "shear_sweep.csv", *rep.table())
    curve = c1_zero_curve(grid)
    header = list(curve.slice_names) + [curve.free, "abs_c1", "abs_c3"]
    rows = [list(map(float, s)) + [float(r), float(a), float(b)]
            for s, r, a, b in zip(curve.slices, curve.roots, curve.abs_c1, curve.abs_c3)]
    write_csv(args.out / "c1_zero_curve.csv", header, rows)
    print(f"min over grid of max(|c1|, |c3|): {rep.min_max:.6e} at "
          f"{dict(zip(rep.names, rep.argmin))}")
    print(f"c1 = 0 curve: {int(curve.found.sum())}/{len(curve.roots)} slices with a root, "
          f"min |c3| = {np.nanmin(curve.abs_c3):.3e}")


if __name__ == "__main__":
    main()
