"""Declarative scenario documents (JSON) with exhaustive validation."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

from ..core_model import (CoatedDisks, ConductorPhase, ElasticPhase, Phases, SmoothCurve,
                          UniformLoad, ValidationError)

RANGES = {
    "order": (3, 64),
    "nodes": (16, 2048),
}
FAMILY_LABELS = ("outer_m2", "outer_m3", "inner_m2", "inner_m3", "eccentric_core")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ScenarioError(ValidationError):
    """All violations found in a document, each as (field path, message)."""

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.violations))


@dataclass(frozen=True)
class Numerics:
    order: int = 8
    nodes: int = 256
    radii: tuple[float, float] | None = None
    tol: float = 1e-12
    seed: int = 0


@dataclass(frozen=True)
class SweepAxisSpec:
    name: str
    lo: float
    hi: float
    count: int
    log: bool = False


@dataclass(frozen=True)
class Campaign:
    free_parameter: str = "kappa_m"
    bracket: tuple[float, float] | None = None
    n_scan: int = 64
    sweep: tuple[SweepAxisSpec, ...] = (SweepAxisSpec("rho", 0.1, 0.9, 20),
                                        SweepAxisSpec("mu_c", 0.1, 10.0, 20, True),
                                        SweepAxisSpec("mu_m", 0.1, 10.0, 20, True))
    families: tuple[str, ...] = ("outer_m2", "outer_m3", "eccentric_core")
    eps: tuple[float, ...] = (0.0, 0.01, 0.05)
    rigidity_nodes: int = 128


@dataclass(frozen=True)
class Scenario:
    geometry_kind: str                          # "disks" | "curves"
    disks: CoatedDisks | None
    curves: tuple[SmoothCurve, SmoothCurve] | None
    phase_kind: str                             # "elastic" | "conductor"
    phases: tuple                               # Phases or three ConductorPhase
    load: UniformLoad | tuple[float, float]     # elastic load or applied field
    numerics: Numerics = Numerics()
    campaign: Campaign = field(default_factory=Campaign)

    @property
    def elastic_phases(self) -> Phases:
        return Phases(*self.phases)

    @property
    def outer_radius(self) -> float:
        if self.geometry_kind == "disks":
            return self.disks.r2
        return max(abs(z) for z in self.curves[1].discretize(1024).z)

    @property
    def radii(self) -> tuple[float, float]:
        if self.numerics.radii is not None:
            return self.numerics.radii
        r2 = self.outer_radius
        return (2 * r2, 4 * r2)

    def boundary_curves(self) -> tuple[SmoothCurve, SmoothCurve]:
        return self.disks.curves() if self.geometry_kind == "disks" else self.curves

    def with_overrides(self, nodes=None, order=None, seed=None) -> "Scenario":
        kw = {k: v for k, v in (("nodes", nodes), ("order", order), ("seed", seed))
              if v is not None}
        if not kw:
            return self
        new = replace(self, numerics=replace(self.numerics, **kw))
        _check_numerics(new.numerics)
        return new


def _check_numerics(num: Numerics):
    errs = []
    for name, (lo, hi) in RANGES.items():
        v = getattr(num, name)
        if not (lo <= v <= hi):
            errs.append((f"numerics.{name}", f"must lie in [{lo}, {hi}], got {v}"))
    if num.nodes % 2:
        errs.append(("numerics.nodes", "must be even"))
    if errs:
        raise ScenarioError(errs)


class _Reader:
    def __init__(self):
        self.errors: list[tuple[str, str]] = []

    def fail(self, path, msg):
        self.errors.append((path, msg))
        return None

    def number(self, obj, key, path, default=None, positive=False, integer=False):
        if not isinstance(obj, dict) or key not in obj:
            if default is not None:
                return default
            return self.fail(f"{path}.{key}", "is required")
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            return self.fail(f"{path}.{key}", f"must be a number, got {type(v).__name__}")
        if integer and not (isinstance(v, int) or float(v).is_integer()):
            return self.fail(f"{path}.{key}", "must be an integer")
        if not math.isfinite(v):
            return self.fail(f"{path}.{key}", "must be finite")
        if positive and v <= 0:
            return self.fail(f"{path}.{key}", f"must be positive, got {v}")
        return int(v) if integer else float(v)

    def section(self, doc, key, path=""):
        full = f"{path}.{key}" if path else key
        if key not in doc:
            return self.fail(full, "section is required")
        if not isinstance(doc[key], dict):
            return self.fail(full, "must be an object")
        return doc[key]


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc


def parse_scenario(text: str) -> Scenario:
    doc = _parse_json(text)
    if not isinstance(doc, dict):
        raise ScenarioError([("", "document must be an object")])
    return scenario_from_dict(doc)


def scenario_from_dict(doc: dict) -> Scenario:
    rd = _Reader()
    known = {"geometry", "phases", "load", "numerics", "campaign"}
    for k in doc:
        if k not in known:
            rd.fail(k, "unknown section")

    # geometry
    geo = rd.section(doc, "geometry")
    kind = disks = curves = None
    if geo is not None:
        kinds = [k for k in ("disks", "curves") if k in geo]
        if len(kinds) != 1:
            rd.fail("geometry", "exactly one of 'disks' or 'curves' is required")
        else:
            kind = kinds[0]
            if kind == "disks":
                disks = _read_disks(rd, geo["disks"])
            else:
                curves = _read_curves(rd, geo["curves"])

    # phases
    ph = rd.section(doc, "phases")
    phase_kind, phases = None, None
    if ph is not None:
        phase_kind, phases = _read_phases(rd, ph)

    # load
    load = None
    if "load" not in doc:
        rd.fail("load", "is required")
    elif phase_kind == "elastic":
        load = _read_elastic_load(rd, doc["load"])
    elif phase_kind == "conductor":
        load = _read_field(rd, doc["load"])

    numerics = _read_numerics(rd, doc.get("numerics", {}))
    campaign = _read_campaign(rd, doc.get("campaign", {}))
    if phase_kind == "conductor" and kind == "curves":
        rd.fail("geometry.curves", "conductor scenarios support concentric disks only")
    if rd.errors:
        raise ScenarioError(rd.errors)
    sc = Scenario(kind, disks, curves, phase_kind, phases, load, numerics, campaign)
    r_out = sc.outer_radius
    if numerics.radii is None:
        sc = replace(sc, numerics=replace(numerics, radii=(2 * r_out, 4 * r_out)))
    elif numerics.radii[0] <= r_out:
        raise ScenarioError([("numerics.radii", f"must exceed the outer radius {r_out}")])
    return sc


def _read_disks(rd: _Reader, d):
    if not isinstance(d, dict):
        return rd.fail("geometry.disks", "must be an object")
    r1 = rd.number(d, "r1", "geometry.disks", positive=True)
    r2 = rd.number(d, "r2", "geometry.disks", positive=True)
    center = d.get("center", [0.0, 0.0])
    if (not isinstance(center, list) or len(center) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in center)):
        rd.fail("geometry.disks.center", "must be a pair of numbers")
        center = [0.0, 0.0]
    if r1 is not None and r2 is not None and r1 >= r2:
        return rd.fail("geometry.disks.r1", f"must be smaller than r2 ({r1} >= {r2})")
    if r1 is None or r2 is None:
        return None
    return CoatedDisks(r1, r2, (float(center[0]), float(center[1])))


def _read_curve(rd: _Reader, lst, path):
    if not isinstance(lst, list) or not lst:
        return rd.fail(path, "must be a non-empty list of [k, re, im] triples")
    modes = []
    for i, item in enumerate(lst):
        ok = (isinstance(item, list) and len(item) == 3
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
              and float(item[0]).is_integer())
        if not ok:
            rd.fail(f"{path}[{i}]", "must be [integer k, real, imag]")
            continue
        modes.append((int(item[0]), complex(item[1], item[2])))
    if len(modes) != len(lst):
        return None
    try:
        return SmoothCurve(tuple(modes))
    except ValidationError as exc:
        return rd.fail(path, str(exc))


def _read_curves(rd: _Reader, c):
    if not isinstance(c, dict):
        return rd.fail("geometry.curves", "must be an object")
    inner = _read_curve(rd, c.get("inner"), "geometry.curves.inner")
    outer = _read_curve(rd, c.get("outer"), "geometry.curves.outer")
    if inner is None or outer is None:
        return None
    from ..kelvin_bem.solver import GeometryOverlap, check_geometry
    try:
        check_geometry(inner, outer)
    except GeometryOverlap as exc:
        return rd.fail("geometry.curves", str(exc))
    return inner, outer


def _read_phases(rd: _Reader, ph):
    kinds = {}
    vals = {}
    for region in ("core", "shell", "matrix"):
        p = ph.get(region)
        path = f"phases.{region}"
        if not isinstance(p, dict):
            rd.fail(path, "must be an object with mu/kappa or sigma")
            continue
        if "sigma" in p and ("mu" in p or "kappa" in p):
            rd.fail(path, "mixes conductor and elastic parameters")
            continue
        if "sigma" in p:
            kinds[region] = "conductor"
            s = rd.number(p, "sigma", path, positive=True)
            vals[region] = None if s is None else ConductorPhase(s)
        else:
            kinds[region] = "elastic"
            mu = rd.number(p, "mu", path, positive=True)
            ka = rd.number(p, "kappa", path, positive=True)
            vals[region] = None if mu is None or ka is None else ElasticPhase(mu, ka)
    for k in ph:
        if k not in ("core", "shell", "matrix"):
            rd.fail(f"phases.{k}", "unknown region")
    if len(set(kinds.values())) > 1:
        majority = max(set(kinds.values()), key=list(kinds.values()).count)
        for region, k in kinds.items():
            if k != majority:
                rd.fail(f"phases.{region}", f"is {k} while the other phases are {majority}")
        return None, None
    if len(kinds) != 3 or any(v is None for v in vals.values()):
        return None, None
    kind = next(iter(kinds.values()))
    return kind, (vals["core"], vals["shell"], vals["matrix"])


def _read_elastic_load(rd: _Reader, load):
    if load == "bulk":
        return UniformLoad.bulk()
    if load == "shear":
        return UniformLoad.shear()
    if isinstance(load, dict) and "A" in load:
        A = load["A"]
        ok = (isinstance(A, list) and len(A) == 2
              and all(isinstance(r, list) and len(r) == 2 for r in A)
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for r in A for v in r))
        if not ok:
            return rd.fail("load.A", "must be a 2x2 list of numbers")
        try:
            return UniformLoad(tuple(tuple(float(v) for v in r) for r in A))
        except ValidationError as exc:
            return rd.fail("load.A", str(exc))
    return rd.fail("load", "must be 'bulk', 'shear' or {'A': [[a, b], [b, d]]}")


def _read_field(rd: _Reader, load):
    if isinstance(load, dict) and "field" in load:
        f = load["field"]
        if (isinstance(f, list) and len(f) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in f)):
            if abs(math.hypot(f[0], f[1]) - 1.0) > 1e-12:
                return rd.fail("load.field", "must be a unit vector")
            return (float(f[0]), float(f[1]))
    return rd.fail("load", "conductor scenarios need {'field': [a1, a2]}")


def _read_numerics(rd: _Reader, num):
    if not isinstance(num, dict):
        rd.fail("numerics", "must be an object")
        return Numerics()
    d = Numerics()
    for k in num:
        if k not in ("order", "nodes", "radii", "tol", "seed"):
            rd.fail(f"numerics.{k}", "unknown field")
    order = rd.number(num, "order", "numerics", default=d.order, integer=True)
    nodes = rd.number(num, "nodes", "numerics", default=d.nodes, integer=True)
    tol = rd.number(num, "tol", "numerics", default=d.tol, positive=True)
    seed = rd.number(num, "seed", "numerics", default=d.seed, integer=True)
    radii = None
    if "radii" in num:
        r = num["radii"]
        if (isinstance(r, list) and len(r) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0 for v in r)
                and r[0] != r[1]):
            radii = tuple(sorted(float(v) for v in r))
        else:
            rd.fail("numerics.radii", "must be two distinct positive numbers")
    out = Numerics(order if order is not None else d.order, nodes if nodes is not None else d.nodes,
                   radii, tol if tol is not None else d.tol, seed if seed is not None else d.seed)
    try:
        _check_numerics(out)
    except ScenarioError as exc:
        rd.errors.extend(exc.violations)
    return out


def _read_campaign(rd: _Reader, c):
    from ..neutrality_lab.roots import PARAMETERS
    from ..neutrality_lab.shear import AXIS_NAMES
    d = Campaign()
    if not isinstance(c, dict):
        rd.fail("campaign", "must be an object")
        return d
    for k in c:
        if k not in ("free_parameter", "bracket", "n_scan", "sweep", "families", "eps",
                     "rigidity_nodes"):
            rd.fail(f"campaign.{k}", "unknown field")
    free = c.get("free_parameter", d.free_parameter)
    if free not in PARAMETERS:
        rd.fail("campaign.free_parameter", f"must be one of {list(PARAMETERS)}")
    bracket = None
    if "bracket" in c:
        b = c["bracket"]
        if (isinstance(b, list) and len(b) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in b)
                and 0 < b[0] < b[1]):
            bracket = (float(b[0]), float(b[1]))
        else:
            rd.fail("campaign.bracket", "must be [lo, hi] with 0 < lo < hi")
    n_scan = rd.number(c, "n_scan", "campaign", default=d.n_scan, integer=True)
    if n_scan is not None and n_scan < 2:
        rd.fail("campaign.n_scan", "must be at least 2")
    sweep = d.sweep
    if "sweep" in c:
        sweep = []
        if not isinstance(c["sweep"], list) or not c["sweep"]:
            rd.fail("campaign.sweep", "must be a non-empty list of axes")
        else:
            for i, ax in enumerate(c["sweep"]):
                p = f"campaign.sweep[{i}]"
                if not isinstance(ax, dict) or ax.get("name") not in AXIS_NAMES:
                    rd.fail(p, f"needs a name from {list(AXIS_NAMES)}")
                    continue
                lo = rd.number(ax, "lo", p, positive=True)
                hi = rd.number(ax, "hi", p, positive=True)
                cnt = rd.number(ax, "count", p, integer=True)
                if cnt is not None and cnt < 2:
                    rd.fail(f"{p}.count", "must be at least 2")
                if lo is not None and hi is not None and lo >= hi:
                    rd.fail(f"{p}.lo", "must be smaller than hi")
                if ax["name"] == "rho" and hi is not None and hi >= 1:
                    rd.fail(f"{p}.hi", "rho must stay below 1")
                if None not in (lo, hi, cnt):
                    sweep.append(SweepAxisSpec(ax["name"], lo, hi, cnt, bool(ax.get("log", False))))
            names = [a.name for a in sweep]
            if len(set(names)) != len(names):
                rd.fail("campaign.sweep", "axis names must be distinct")
        sweep = tuple(sweep)
    families = c.get("families", list(d.families))
    if not isinstance(families, list) or not families or any(f not in FAMILY_LABELS for f in families):
        rd.fail("campaign.families", f"must be a non-empty list drawn from {list(FAMILY_LABELS)}")
        families = list(d.families)
    eps = c.get("eps", list(d.eps))
    if (not isinstance(eps, list) or not eps
            or not all(isinstance(e, (int, float)) and not isinstance(e, bool) and 0 <= e < 0.5
                       for e in eps)):
        rd.fail("campaign.eps", "must be a non-empty list of numbers in [0, 0.5)")
        eps = list(d.eps)
    rn = rd.number(c, "rigidity_nodes", "campaign", default=d.rigidity_nodes, integer=True)
    if rn is not None and (rn < 16 or rn % 2):
        rd.fail("campaign.rigidity_nodes", "must be an even number >= 16")
    return Campaign(free if free in PARAMETERS else d.free_parameter, bracket,
                    n_scan or d.n_scan, sweep, tuple(families),
                    tuple(sorted(float(e) for e in eps)), rn or d.rigidity_nodes)


# --- canonical form -------------------------------------------------------

def _curve_list(curve: SmoothCurve):
    return [[k, c.real, c.imag] for k, c in curve.modes]


def scenario_to_dict(sc: Scenario) -> dict:
    if sc.geometry_kind == "disks":
        geo = {"disks": {"r1": sc.disks.r1, "r2": sc.disks.r2, "center": list(sc.disks.center)}}
    else:
        geo = {"curves": {"inner": _curve_list(sc.curves[0]), "outer": _curve_list(sc.curves[1])}}
    regions = ("core", "shell", "matrix")
    if sc.phase_kind == "elastic":
        phases = {r: {"mu": p.mu, "kappa": p.kappa} for r, p in zip(regions, sc.phases)}
        load = {"A": [list(row) for row in sc.load.matrix_A]}
    else:
        phases = {r: {"sigma": p.sigma} for r, p in zip(regions, sc.phases)}
        load = {"field": list(sc.load)}
    n = sc.numerics
    num = {"order": n.order, "nodes": n.nodes, "tol": n.tol, "seed": n.seed}
    if n.radii is not None:
        num["radii"] = list(n.radii)
    c = sc.campaign
    camp = {"free_parameter": c.free_parameter, "n_scan": c.n_scan,
            "sweep": [{"name": a.name, "lo": a.lo, "hi": a.hi, "count": a.count, "log": a.log}
                      for a in c.sweep],
            "families": list(c.families), "eps": list(c.eps), "rigidity_nodes": c.rigidity_nodes}
    if c.bracket is not None:
        camp["bracket"] = list(c.bracket)
    return {"geometry": geo, "phases": phases, "load": load, "numerics": num, "campaign": camp}


def serialize_scenario(sc: Scenario) -> str:
    """Canonical JSON: sorted keys, fixed separators, shortest round-trip floats."""
    return json.dumps(scenario_to_dict(sc), sort_keys=True, separators=(",", ":"))


def scenario_digest(sc: Scenario) -> str:
    return hashlib.sha256(serialize_scenario(sc).encode()).hexdigest()


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
