"""Command-line entry point: ``neutral-lame <command> --scenario FILE``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from ..conductivity_disks import (ConductivityConfig, is_neutral, neutrality_residual,
                                  solve_disk_conductivity, solve_for_sigma_m)
from ..core_model import CoatedDisks, ValidationError
from ..elasticity_disks import (etaone_trace, exterior_bulk_coefficient, far_field,
                                solve_coated_disk_elasticity)
from ..kelvin_bem import (KelvinKernel, TransmissionScenario, check_divdiv_identity,
                          check_divergence_identity, kelvin_matrix, neutrality_gap,
                          solve_transmission)
from ..neutrality_lab import (Axis, NoSignChange, RootFindTask, ShapeFamily, SweepGrid,
                              analytic_extension_test, c1_zero_curve, certify,
                              find_neutral_bulk, plemelj_jump_check, rigidity_experiment,
                              shear_infeasibility_sweep)
from .fixtures import load_fixtures, within
from .records import append_jsonl, deterministic_timestamp, make_record, write_csv
from .scenario import ParseError, Scenario, ScenarioError, load_scenario, scenario_digest

COMMANDS = ("solve-disk", "solve-bem", "check-neutral", "find-neutral", "shear-sweep",
            "rigidity", "verify-identities", "plemelj-check")


class CommandFailed(ArithmeticError):
    """Numerical failure that still produced outputs worth recording."""

    def __init__(self, message, outputs=None, table=None):
        super().__init__(message)
        self.outputs = outputs or {}
        self.table = table


class Result:
    def __init__(self, outputs, tolerances=None, table=None, extra_tables=None, summary=""):
        self.outputs = outputs
        self.tolerances = tolerances or {}
        self.table = table                     # (header, rows) or None
        self.extra_tables = extra_tables or {}  # suffix -> (header, rows)
        self.summary = summary


def _need(cond: bool, path: str, msg: str):
    if not cond:
        raise ScenarioError([(path, msg)])


def _conductivity_config(sc: Scenario, sigma_m=None) -> ConductivityConfig:
    core, shell, matrix = sc.phases
    cfg = ConductivityConfig(sc.disks, core, shell, matrix, sc.load)
    return cfg.with_matrix(sigma_m) if sigma_m is not None else cfg


def _series(sc: Scenario, load=None):
    _need(sc.geometry_kind == "disks", "geometry", "series solvers need concentric disks")
    _need(sc.disks.center == (0.0, 0.0), "geometry.disks.center",
          "series solvers need disks centred at the origin")
    return solve_coated_disk_elasticity(sc.disks, sc.elastic_phases, load or sc.load,
                                        sc.numerics.order)


def _far_outputs(ff):
    return {"c1": ff.c1, "c3": ff.c3, "gap": ff.gap, "relative_gap": ff.relative_gap,
            "gap_radius": ff.radius}


def cmd_solve_disk(sc: Scenario, args) -> Result:
    if sc.phase_kind == "conductor":
        _need(sc.geometry_kind == "disks", "geometry", "conductor scenarios need disks")
        sol = solve_disk_conductivity(_conductivity_config(sc))
        out = {"exterior_dipole": sol.exterior_dipole, "core_a": sol.core_a,
               "shell_a": sol.shell_a, "shell_b": sol.shell_b}
        return Result(out, {"dipole": sc.numerics.tol},
                      summary=f"exterior dipole {sol.exterior_dipole:.6e}")
    pot = _series(sc)
    ff = far_field(pot, sc.radii)
    out = _far_outputs(ff)
    out["exterior_bulk_coefficient"] = exterior_bulk_coefficient(pot)
    return Result(out, {"fit_consistency": 1e-8, "series_order": sc.numerics.order},
                  summary=f"gap {ff.gap:.6e}  c1 {ff.c1:.6g}  c3 {ff.c3:.6g}")


def cmd_solve_bem(sc: Scenario, args) -> Result:
    _need(sc.phase_kind == "elastic", "phases", "the boundary-integral solver is elastic only")
    inner, outer = sc.boundary_curves()
    sol = solve_transmission(TransmissionScenario(inner, outer, sc.elastic_phases, sc.load,
                                                  sc.numerics.nodes))
    ff = neutrality_gap(sol, radii=sc.radii)
    out = _far_outputs(ff)
    out.update(system_residual=sol.residual, nodes=sol.node_count)
    return Result(out, {"system_residual": 1e-10, "nodes": sol.node_count},
                  summary=f"gap {ff.gap:.6e}  residual {sol.residual:.2e}")


def cmd_check_neutral(sc: Scenario, args) -> Result:
    tol = sc.numerics.tol
    if sc.phase_kind == "conductor":
        cfg = _conductivity_config(sc)
        res = neutrality_residual(cfg)
        dip = solve_disk_conductivity(cfg).exterior_dipole
        out = {"residual": res, "neutral": is_neutral(cfg, tol), "exterior_dipole": dip}
        return Result(out, {"residual": tol}, summary=f"residual {res:.3e}")
    pot = _series(sc)
    ff = far_field(pot, sc.radii)
    out = _far_outputs(ff)
    out["neutral"] = ff.relative_gap <= tol
    if sc.load.kind == "bulk":
        _, cert = certify(sc.disks, sc.elastic_phases, sc.numerics.order, seed=sc.numerics.seed)
        out.update(shell_div_residual=cert.shell.div_residual,
                   shell_beta_residual=cert.shell.beta_residual,
                   shell_antisymmetry=cert.shell.antisymmetry,
                   shell_laplacian=cert.shell.laplacian,
                   shell_dilatation_residual=cert.shell_dilatation_residual,
                   core_linear_residual=cert.core.residual,
                   matrix_potential_residual=cert.matrix_potential_residual,
                   hypotheses_hold=cert.hypotheses.all, k_star=cert.constants.k_star)
    return Result(out, {"relative_gap": tol}, summary=f"relative gap {ff.relative_gap:.3e}")


def cmd_find_neutral(sc: Scenario, args) -> Result:
    camp = sc.campaign
    if sc.phase_kind == "conductor":
        _need(camp.free_parameter in ("kappa_m", "sigma_m"), "campaign.free_parameter",
              "conductor scenarios solve for the matrix conductivity")
        core, shell, _ = sc.phases
        sm = solve_for_sigma_m(sc.disks, core, shell)
        res = neutrality_residual(_conductivity_config(sc, sm))
        return Result({"root": sm, "parameter": "sigma_m", "residual": res},
                      {"residual": sc.numerics.tol}, summary=f"sigma_m = {sm!r}")
    _need(sc.geometry_kind == "disks", "geometry", "find-neutral needs concentric disks")
    task = RootFindTask(camp.free_parameter, camp.bracket, sc.numerics.tol, camp.n_scan)
    header = [camp.free_parameter, "objective"]
    try:
        root = find_neutral_bulk(sc.disks, sc.elastic_phases, task, sc.numerics.order,
                                 seed=sc.numerics.seed)
    except NoSignChange as exc:
        rows = [[float(x), float(v)] for x, v in exc.scan]
        raise CommandFailed(str(exc), {"scan": rows}, (header, rows)) from exc
    c = root.certificate
    out = {"parameter": root.parameter, "root": root.value, "objective": root.objective_value,
           "gap": c.gap, "shell_div_residual": c.shell.div_residual,
           "shell_beta_residual": c.shell.beta_residual,
           "shell_dilatation_residual": c.shell_dilatation_residual,
           "shell_antisymmetry": c.shell.antisymmetry, "shell_laplacian": c.shell.laplacian,
           "core_linear_residual": c.core.residual,
           "matrix_potential_residual": c.matrix_potential_residual,
           "hypotheses_hold": c.hypotheses.all, "k_star": c.constants.k_star,
           "brackets": [list(b) for b in root.brackets]}
    rows = [[float(x), float(v)] for x, v in root.scan]
    return Result(out, {"objective": task.tol, "certificate": 1e-9}, (header, rows),
                  summary=f"{root.parameter} = {root.value!r}  gap {c.gap:.3e}")


def _grid(sc: Scenario) -> SweepGrid:
    _need(sc.phase_kind == "elastic" and sc.geometry_kind == "disks", "geometry",
          "shear sweeps need an elastic concentric-disk template")
    axes = tuple(Axis(a.name, a.lo, a.hi, a.count, a.log) for a in sc.campaign.sweep)
    return SweepGrid(axes, sc.disks, sc.elastic_phases, sc.numerics.seed)


def cmd_shear_sweep(sc: Scenario, args) -> Result:
    grid = _grid(sc)
    rep = shear_infeasibility_sweep(grid)
    header, rows = rep.table()
    out = {"min_max": rep.min_max, "argmin": dict(zip(rep.names, rep.argmin)),
           "points": len(rows), "excluded": int(rep.excluded.sum())}
    tol = {"floor_rel": 0.2}
    try:
        fx = load_fixtures()["shear_sweep"]
        if fx.get("grid") == _grid_signature(grid):
            out["frozen_floor"] = fx["min_max"]
            out["matches_frozen_floor"] = within(rep.min_max, fx["min_max"], fx["rel_tol"])
    except (OSError, KeyError, ValueError):
        pass
    extra = {}
    if args.root_curve:
        curve = c1_zero_curve(grid)
        extra["c1_zero_curve"] = (list(curve.slice_names) + [curve.free, "abs_c1", "abs_c3"],
                                  [list(map(float, s)) + [float(r), float(a), float(b)]
                                   for s, r, a, b in zip(curve.slices, curve.roots,
                                                         curve.abs_c1, curve.abs_c3)])
        out["root_curve_min_abs_c3"] = float(np.nanmin(curve.abs_c3)) if curve.found.any() \
            else float("nan")
    return Result(out, tol, (header, rows), extra, summary=f"min-max {rep.min_max:.6e}")


def _grid_signature(grid: SweepGrid) -> list:
    return [[a.name, a.lo, a.hi, a.count, a.log] for a in grid.axes]


def _family(label: str) -> ShapeFamily:
    if label == "eccentric_core":
        return ShapeFamily("eccentric")
    kind, m = label.split("_m")
    return ShapeFamily(kind, int(m))


def cmd_rigidity(sc: Scenario, args) -> Result:
    _need(sc.phase_kind == "elastic" and sc.geometry_kind == "disks", "geometry",
          "the rigidity experiment needs an elastic concentric-disk template")
    camp = sc.campaign
    # an explicit --nodes wins over the campaign's own node count
    nodes = getattr(args, "nodes", None) or camp.rigidity_nodes
    rep = rigidity_experiment(sc.disks, sc.elastic_phases,
                              tuple(_family(f) for f in camp.families), camp.eps,
                              camp.free_parameter, nodes=nodes)
    header = ["family", "eps", camp.free_parameter, "floor", "relative_floor"]
    rows = [[r.family, r.eps, r.parameter, r.floor, r.relative_floor] for r in rep.results]
    checks = {f: rep.check(f) for f in camp.families}
    out = {"neutral_value": rep.neutral_value, "monotone_floors": checks}
    return Result(out, {"eps0_gap": 1e-8, "factor": 10.0, "nodes": nodes}, (header, rows),
                  summary=" ".join(f"{k}:{'ok' if v else 'FAIL'}" for k, v in checks.items()))


def cmd_verify_identities(sc: Scenario, args) -> Result:
    _need(sc.phase_kind == "elastic", "phases", "kernel identities need elastic phases")
    rng = np.random.default_rng(sc.numerics.seed)
    out = {}
    for region, ph in zip(("core", "shell", "matrix"), sc.phases):
        k = KelvinKernel(ph)
        pts = rng.uniform(-3, 3, (100, 2, 2))
        div = max(check_divergence_identity(k, x, y) for x, y in pts)
        x = rng.normal(size=(100, 2))
        G = kelvin_matrix(k, x)
        sym = float(np.max(np.abs(G - np.swapaxes(G, -1, -2))))
        even = float(np.max(np.abs(G - kelvin_matrix(k, -x))))
        vals, exp = check_divdiv_identity(k, [[0.3, 0.0], [3.0, 0.0]])
        out[region] = {"divGG_residual": div, "symmetry": sym, "evenness": even,
                       "divdiv_inside": vals[0], "divdiv_inside_expected": exp[0],
                       "divdiv_outside": vals[1]}
    return Result(out, {"divGG": 1e-8, "divdiv": 1e-3},
                  summary=" ".join(f"{r}:{o['divGG_residual']:.1e}" for r, o in out.items()))


def cmd_plemelj_check(sc: Scenario, args) -> Result:
    inner, _ = sc.boundary_curves()
    n = sc.numerics.nodes
    tests = {"z^2": lambda z: z ** 2, "conj(z)": np.conj, "zero": lambda z: 0 * z}
    out = {name: plemelj_jump_check(g, inner, n).residual for name, g in tests.items()}
    ext = analytic_extension_test(np.conj, inner, n=n)
    out["extension_conj_z"] = ext.extendable
    if sc.phase_kind == "elastic" and sc.geometry_kind == "disks" and sc.disks.center == (0.0, 0.0):
        from ..core_model import UniformLoad
        pot = _series(sc, UniformLoad.bulk())
        g = etaone_trace(pot, inner.discretize(n).z)
        out["extension_core_trace"] = analytic_extension_test(g, inner, n=n).extendable
    return Result(out, {"jump": 1e-6, "extension": 1e-8},
                  summary=" ".join(f"{k}:{v:.1e}" for k, v in out.items() if isinstance(v, float)))


HANDLERS = dict(zip(COMMANDS, (cmd_solve_disk, cmd_solve_bem, cmd_check_neutral,
                               cmd_find_neutral, cmd_shear_sweep, cmd_rigidity,
                               cmd_verify_identities, cmd_plemelj_check)))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="neutral-lame",
                                description="Neutral coated inclusions: solvers and campaigns.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--scenario", required=True, help="scenario JSON file")
        s.add_argument("--out", default=".", help="output directory")
        s.add_argument("--quiet", action="store_true", help="only the record on stdout")
        s.add_argument("--nodes", type=int)
        s.add_argument("--order", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--timestamp", action="store_true",
                       help="record wall-clock time (breaks byte-for-byte reproducibility)")
        if name == "shear-sweep":
            s.add_argument("--root-curve", action="store_true",
                           help="also trace the c1 = 0 curve")
    return p


def _emit(out_dir: Path, command: str, record: dict, result_table, extra, quiet: bool,
          summary: str):
    line = append_jsonl(out_dir / f"{command}.jsonl", record)
    if result_table is not None:
        write_csv(out_dir / f"{command}.csv", *result_table)
    for suffix, table in (extra or {}).items():
        write_csv(out_dir / f"{command}.{suffix}.csv", *table)
    if quiet:
        sys.stdout.write(line)
    else:
        print(f"{command}: {record['status']}  {summary}")


def run_command(name: str, scenario: Scenario, args) -> tuple[int, dict]:
    digest = scenario_digest(scenario)
    ts = int(time.time()) if getattr(args, "timestamp", False) else deterministic_timestamp()
    out_dir = Path(args.out)
    try:
        res = HANDLERS[name](scenario, args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2, {}
    except CommandFailed as exc:
        rec = make_record(name, digest, "failed", dict(exc.outputs, error=str(exc)), {}, ts)
        _emit(out_dir, name, rec, exc.table, None, args.quiet, str(exc))
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3, rec
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        rec = make_record(name, digest, "failed", {"error": f"{type(exc).__name__}: {exc}"}, {}, ts)
        _emit(out_dir, name, rec, None, None, args.quiet, str(exc))
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3, rec
    rec = make_record(name, digest, "ok", res.outputs, res.tolerances, ts)
    _emit(out_dir, name, rec, res.table, res.extra_tables, args.quiet, res.summary)
    return 0, rec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario).with_overrides(args.nodes, args.order, args.seed)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        for path, msg in exc.violations:
            print(f"invalid {path}: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return 2
    code, _ = run_command(args.command, sc, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
