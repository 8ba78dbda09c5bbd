"""Gap floors of the bulk-neutral template under shape perturbations."""

import argparse

from neutral_lame.neutrality_lab import ShapeFamily, rigidity_experiment
from neutral_lame.neutrality_lab.rigidity import default_template


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=128)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.0, 0.01, 0.05])
    ap.add_argument("--inner", action="store_true", help="include core-boundary perturbations")
    args = ap.parse_args()

    fams = [ShapeFamily("outer", 2), ShapeFamily("outer", 3), ShapeFamily("eccentric")]
    if args.inner:
        fams += [ShapeFamily("inner", 2), ShapeFamily("inner", 3)]
    rep = rigidity_experiment(*default_template(), families=tuple(fams),
                              eps_values=tuple(args.eps), nodes=args.nodes)
    print(f"neutral {rep.free_parameter} for concentric disks: {rep.neutral_value!r}")
    print(f"{'family':16s} {'eps':>6s} {'argmin':>14s} {'floor':>12s}")
    for r in rep.results:
        print(f"{r.family:16s} {r.eps:6.3f} {r.parameter:14.10f} {r.floor:12.4e}")
    for f in dict.fromkeys(r.family for r in rep.results):
        print(f"{f}: {'monotone' if rep.check(f) else 'NOT monotone'}")


if __name__ == "__main__":
    main()
