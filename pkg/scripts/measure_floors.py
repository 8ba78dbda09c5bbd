"""Measure the strictly positive floors used as regression fixtures.

Run once, inspect, commit the resulting JSON. Tests compare fresh runs
against these numbers with a 20% relative tolerance.
"""

import argparse
import json
import platform
from pathlib import Path

import numpy as np
import scipy

from neutral_lame import __version__
from neutral_lame.neutrality_lab import SweepGrid, c1_zero_curve, shear_infeasibility_sweep
from neutral_lame.neutrality_lab.rigidity import default_template, rigidity_experiment

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "neutral_lame" / "data" / "fixtures.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()

    grid = SweepGrid()
    sweep = shear_infeasibility_sweep(grid)
    curve = c1_zero_curve(grid)
    geometry, phases = default_template()
    rig = rigidity_experiment(geometry, phases)

    provenance = {
        "script": "scripts/measure_floors.py",
        "tool_version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }
    data = {
        "provenance": provenance,
        "shear_sweep": {
            "grid": [[a.name, a.lo, a.hi, a.count, a.log] for a in grid.axes],
            "template": {"r2": grid.geometry.r2,
                         "mu": [p.mu for p in grid.phases], "kappa": [p.kappa for p in grid.phases]},
            "min_max": sweep.min_max,
            "argmin": list(sweep.argmin),
            "root_curve_min_abs_c3": float(np.nanmin(curve.abs_c3)),
            "root_curve_slices_with_root": int(curve.found.sum()),
            "rel_tol": 0.2,
        },
        "rigidity": {
            "template": {"r1": geometry.r1, "r2": geometry.r2,
                         "mu": [p.mu for p in phases], "kappa": [p.kappa for p in phases]},
            "free_parameter": rig.free_parameter,
            "neutral_value": rig.neutral_value,
            "nodes": 128,
            "floors": {r.family: {} for r in rig.results},
            "rel_tol": 0.2,
        },
    }
    for r in rig.results:
        data["rigidity"]["floors"][r.family][repr(r.eps)] = r.floor
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(json.dumps(data, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
