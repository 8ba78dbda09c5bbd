"""Locate the bulk-neutral matrix modulus for a coated disk and print its certificate."""

import argparse

from neutral_lame.core_model import CoatedDisks, phases_from_moduli, shell_dilatation
from neutral_lame.neutrality_lab import RootFindTask, find_neutral_bulk, thin_shell_sequence


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--r1", type=float, default=1.0)
    ap.add_argument("--r2", type=float, default=2.0)
    ap.add_argument("--mu", type=float, nargs=3, default=[2.0, 1.0, 1.0],
                    metavar=("CORE", "SHELL", "MATRIX"))
    ap.add_argument("--kappa", type=float, nargs=3, default=[1.0, 2.0, 1.0],
                    metavar=("CORE", "SHELL", "MATRIX"))
    ap.add_argument("--free", default="kappa_m")
    ap.add_argument("--thin-shell", action="store_true",
                    help="also follow the root as r1 approaches r2")
    args = ap.parse_args()

    geo = CoatedDisks(args.r1, args.r2)
    ph = phases_from_moduli(args.mu, args.kappa)
    root = find_neutral_bulk(geo, ph, RootFindTask(args.free))
    c = root.certificate
    print(f"{root.parameter} = {root.value!r}  (objective {root.objective_value:.2e})")
    print(f"gap                        {c.gap:.3e}")
    print(f"matrix potential residual  {c.matrix_potential_residual:.3e}")
    print(f"shell div u                {c.shell.div_values.mean():.12f}")
    print(f"  closed-form alpha        {c.constants.alpha:.12f}")
    print(f"  shell_dilatation         {shell_dilatation(root.phases.shell, root.phases.matrix):.12f}")
    print(f"shell skew / laplacian     {c.shell.antisymmetry:.2e} / {c.shell.laplacian:.2e}")
    print(f"core fit residual          {c.core.residual:.3e}")
    print(f"hypotheses                 {c.hypotheses}")
    print(f"k*                         {c.constants.k_star:.6f}")
    if args.thin_shell:
        seq = thin_shell_sequence(geo, ph)
        print("r1/r2 in (0.9, 0.99, 0.999):", ", ".join(f"{v:.6f}" for v in seq),
              f"-> kappa_c = {ph.core.kappa}")


if __name__ == "__main__":
    main()
