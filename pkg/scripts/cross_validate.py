"""Series versus boundary-integral displacements on random concentric coated disks."""

import argparse

import numpy as np

from neutral_lame.core_model import CoatedDisks, UniformLoad, phases_from_moduli
from neutral_lame.elasticity_disks import (displacement_field, random_annulus_points,
                                           solve_coated_disk_elasticity)
from neutral_lame.kelvin_bem import TransmissionScenario, evaluate_field, solve_transmission


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--nodes", type=int, default=256)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    for i in range(args.count):
        r1 = rng.uniform(0.3, 0.8)
        ph = phases_from_moduli(rng.uniform(0.5, 5, 3), rng.uniform(0.5, 5, 3))
        a, b, c = rng.normal(size=3)
        load = UniformLoad(((a, b), (b, c)))
        geo = CoatedDisks(r1, 1.0)
        pot = solve_coated_disk_elasticity(geo, ph, load)
        sol = solve_transmission(TransmissionScenario.from_disks(geo, ph, load, args.nodes))
        z = np.concatenate([random_annulus_points(1.05, 3.0, 50, i),
                            random_annulus_points(r1, 1.0, 50, i + 100, margin=0.02),
                            random_annulus_points(0.0, r1, 50, i + 200, margin=0.02)])
        u = evaluate_field(sol, z)
        ref = displacement_field(pot, z)
        err = np.abs(u[:, 0] + 1j * u[:, 1] - ref) / np.abs(ref)
        print(f"scenario {i}: r1={r1:.3f}  max rel diff matrix {err[:50].max():.1e}  "
              f"shell {err[50:100].max():.1e}  core {err[100:].max():.1e}  "
              f"system residual {sol.residual:.1e}")


if __name__ == "__main__":
    main()
