"""Command line scenario runner.

Each scenario maps a JSON-style configuration to library calls and
collects the outcome in a :class:`Report`: a ``results`` object (written
as JSON) and named tables (written as CSV, one file per table).  A check
that fails is a normal result and exits with status 0; only bad usage,
domain errors and I/O errors give a nonzero status.

Examples
--------
::

    curvbound --scenario thin-iteration --space '{"space": "plane"}' \\
        --param a=5 --param b=0.9 --param gamma=1.5707963267948966 --format csv

    curvbound --scenario defect-descent --space '{"space": "cone", "total_angle": 7.853981633974483}' \\
        --param hinge='"across-apex"'
"""

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .comparison import (
    ANGLE_TOL,
    Hinge,
    check_balanced,
    check_property,
    estimate_curvature_floor,
)
from .errors import CurvBoundError, DomainError
from .globalization import TRACE_COLUMNS, defect_descent, globalize_check, thin_hinge_iteration
from .identities import midpoint_residuals, triangle_residuals, trig_identity_residuals
from .model import (
    AlexandrovConfig,
    alexandrov_compare,
    midpoint_distance,
    side_from_sas,
    signs_agree,
    triple_exists,
)
from .spaces import Cone, HyperbolicPlane, Plane, Sphere, space_from_json
from .trig import model_diameter

__all__ = ["SCENARIOS", "ScenarioConfig", "Table", "Report", "run_scenario", "emit_report", "main"]

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


class UsageError(ValueError):
    """Invalid configuration or unknown scenario."""


@dataclass
class ScenarioConfig:
    """Everything a scenario run depends on.

    ``params`` holds the scenario-specific fields (hinge, grid sizes,
    sample counts, ...).  ``kappa`` defaults to the space's known
    curvature floor, or 0 when it has none.
    """

    scenario: str
    space: dict = field(default_factory=lambda: {"space": "plane"})
    kappa: float = None
    tolerance: float = None
    seed: int = 0
    n_max: int = 200
    params: dict = field(default_factory=dict)

    _CORE = ("scenario", "space", "kappa", "tolerance", "seed", "n_max")

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        if "scenario" not in data:
            raise UsageError("configuration needs a 'scenario'")
        params = dict(data.pop("params", {}) or {})
        core = {k: data.pop(k) for k in cls._CORE if k in data}
        data.pop("format", None)
        params.update(data)  # remaining top-level keys are scenario parameters
        cfg = cls(**core, params=params)
        cfg.validate()
        return cfg

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise UsageError(f"unknown scenario {self.scenario!r}; choose from {sorted(SCENARIOS)}")
        if isinstance(self.space, str):
            self.space = {"space": self.space}
        if not isinstance(self.space, dict):
            raise UsageError("space must be a JSON object such as {\"space\": \"sphere\", \"radius\": 1}")
        if self.kappa is not None:
            self.kappa = float(self.kappa)
        if self.tolerance is not None:
            self.tolerance = float(self.tolerance)
            if self.tolerance < 0:
                raise UsageError("tolerance must be nonnegative")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise UsageError("seed must be an integer")
        if not isinstance(self.n_max, int) or self.n_max < 1:
            raise UsageError("n_max must be a positive integer")
        _require_finite({"space": self.space, "kappa": self.kappa,
                         "tolerance": self.tolerance, "params": self.params})

    def to_json(self):
        return {
            "scenario": self.scenario,
            "space": self.space,
            "kappa": self.kappa,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "n_max": self.n_max,
            "params": self.params,
        }


def _require_finite(obj, path="config"):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return
    if isinstance(obj, (int, float)):
        if not math.isfinite(obj):
            raise UsageError(f"{path} must be finite")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            _require_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _require_finite(v, f"{path}[{i}]")


@dataclass
class Table:
    columns: tuple
    rows: list


@dataclass
class Report:
    config: dict
    results: dict
    tables: dict
    version: str = __version__
    wall_time: float = 0.0

    def to_json(self, include_timing=False):
        out = {"artifact": "curvbound", "version": self.version, "config": self.config,
               "results": self.results}
        if include_timing:
            out["wall_time"] = self.wall_time
        return _plain(out)


def _plain(obj):
    """Convert numpy scalars/arrays to Python values; non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


# ---------------------------------------------------------------- helpers


def _space(cfg):
    try:
        return space_from_json(cfg.space)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"bad space descriptor {cfg.space!r}: {exc}") from exc


def _kappa(cfg, space):
    if cfg.kappa is not None:
        return cfg.kappa
    floor = space.curvature_floor
    return 0.0 if floor is None else float(floor)


def _base_point(space, given=None):
    if given is not None:
        return space.validate(given)
    if isinstance(space, Sphere):
        return space.point(1.0, 0.3)
    if isinstance(space, HyperbolicPlane):
        return HyperbolicPlane.point(0.0, 0.0)
    if isinstance(space, Cone):
        return space.point(1.0, 0.0)
    return np.zeros(2)


def _preset_hinge(space, name):
    if name == "octant":
        if isinstance(space, Sphere):
            quarter = 0.5 * math.pi
            return Hinge.from_points(space, space.point(0.0, 0.0), space.point(quarter, 0.0),
                                     space.point(quarter, quarter))
        return Hinge.from_sas(space, _base_point(space), 1.0, 1.0, 0.5 * math.pi)
    if name == "across-apex":
        if not isinstance(space, Cone):
            raise UsageError("the 'across-apex' hinge needs a cone space")
        phi = 0.25 * space.total_angle + 0.6
        return Hinge.from_points(space, space.point(1.0, 0.0), space.point(1.5, phi),
                                 space.point(1.5, -phi))
    raise UsageError(f"unknown hinge preset {name!r}; use 'octant' or 'across-apex'")


def _hinge(space, params):
    """Hinge from a preset name, explicit points, or SAS data (a, b, gamma)."""
    spec = params.get("hinge")
    if spec is None:
        if all(k in params for k in ("a", "b", "gamma")):
            spec = {k: params[k] for k in ("a", "b", "gamma", "p", "heading") if k in params}
        else:
            raise UsageError("scenario needs 'hinge' (preset, points or a/b/gamma) or a, b, gamma")
    if isinstance(spec, str):
        return _preset_hinge(space, spec)
    if isinstance(spec, dict) and all(k in spec for k in ("p", "x", "y")):
        return Hinge.from_points(space, spec["p"], spec["x"], spec["y"])
    if isinstance(spec, dict) and all(k in spec for k in ("a", "b", "gamma")):
        p = _base_point(space, spec.get("p"))
        return Hinge.from_sas(space, p, float(spec["b"]), float(spec["a"]), float(spec["gamma"]),
                              float(spec.get("heading", 0.0)))
    raise UsageError(f"cannot build a hinge from {spec!r}")


def _verdict_table(named):
    cols = ("check", "property", "kappa", "passed", "worst_margin", "tolerance")
    rows = [(name, v.property, v.kappa, v.passed, v.worst_margin, v.tolerance) for name, v in named]
    return Table(cols, rows)


def _summary(residuals, tolerances, default_tol):
    out, rows = {}, []
    for name, vals in residuals.items():
        tol = tolerances.get(name, default_tol)
        worst = float(np.max(vals)) if np.size(vals) else 0.0
        out[name] = {"max_residual": worst, "tolerance": tol, "passed": worst <= tol}
        rows.append((name, worst, tol, worst <= tol))
    return out, rows


# -------------------------------------------------------------- scenarios


def _trig_identities(cfg):
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    n = int(p.get("n_samples", 10000))
    kappas = np.asarray(p.get("kappas", [-2.0, -1.0, -1e-7, 0.0, 1e-7, 0.5, 1.0, 2.0]), float)
    x_max = float(p.get("x_max", 10.0))
    tol = 1e-12 if cfg.tolerance is None else cfg.tolerance
    k = rng.choice(kappas, n)
    x = rng.uniform(-x_max, x_max, n)
    y = rng.uniform(-x_max, x_max, n)
    out, rows = _summary(trig_identity_residuals(k, x, y), {}, tol)
    results = {"n_samples": n, "identities": out, "passed": all(v["passed"] for v in out.values())}
    return results, {"identities": Table(("identity", "max_residual", "tolerance", "passed"), rows)}


TRIANGLE_TOLERANCES = {"round_trip": 1e-9, "cosines_sum": 1e-10, "cosines_diff": 1e-10,
                       "cosines_a": 1e-10, "cosines_b": 1e-10, "cosines_cs": 1e-10}


def _random_triangles(rng, kappa, n):
    reach = 0.49 * model_diameter(kappa) if kappa > 0 else 3.0
    a = rng.uniform(0.01 * reach, reach, n)
    b = rng.uniform(0.01 * reach, reach, n)
    gamma = rng.uniform(0.05, math.pi - 0.05, n)
    return a, b, gamma


def _triangle_solvers(cfg):
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    n = int(p.get("n_samples", 1000))
    kappas = [cfg.kappa] if cfg.kappa is not None else [-1.0, 0.0, 1.0]
    tols = dict(TRIANGLE_TOLERANCES)
    if cfg.tolerance is not None:
        tols = {k: cfg.tolerance for k in tols}
    default = 1e-9 if cfg.tolerance is None else cfg.tolerance
    results, rows = {"n_samples": n, "by_kappa": {}}, []
    for kappa in kappas:
        a, b, gamma = _random_triangles(rng, kappa, n)
        res = triangle_residuals(kappa, a, b, gamma)
        c = np.asarray(side_from_sas(kappa, a, b, gamma))
        l = np.array([midpoint_distance(kappa, *t) for t in zip(a.tolist(), b.tolist(), c.tolist())])
        res.update({f"midpoint_{k}": v for k, v in midpoint_residuals(kappa, a, b, c, l).items()})
        out, r = _summary(res, tols, default)
        results["by_kappa"][repr(kappa)] = out
        rows += [(kappa, *row) for row in r]
    if all(k in p for k in ("a", "b", "gamma")):
        kappa = kappas[0]
        a, b, g = float(p["a"]), float(p["b"]), float(p["gamma"])
        c = float(side_from_sas(kappa, a, b, g))
        results["solution"] = {"kappa": kappa, "a": a, "b": b, "gamma": g, "c": c,
                               "midpoint_to_c": midpoint_distance(kappa, a, b, c)}
    results["passed"] = all(row[-1] for row in rows)
    return results, {"laws": Table(("kappa", "law", "max_residual", "tolerance", "passed"), rows)}


def _model_sampler(kappa):
    """Unit model space for the sign of kappa and the factor turning its distances into kappa's."""
    if kappa > 0:
        return Sphere(1.0), 1.0 / math.sqrt(kappa), 0.7
    if kappa < 0:
        return HyperbolicPlane(), 1.0 / math.sqrt(-kappa), 1.5
    return Plane(), 1.0, 1.5


def _lemma_admissible(kappa, c):
    """Whether the comparison hinge with sides ``|pq| + |qx|``, ``|py|``, ``|xy|`` exists."""
    d = model_diameter(kappa)
    if not (c.d_py < d and c.d_qy < d and c.d_pq + c.d_qx < d):
        return False
    try:
        return triple_exists(kappa, c.d_pq + c.d_qx, c.d_py, c.d_xy)
    except DomainError:
        return False


def _alexandrov_lemma(cfg):
    p = cfg.params
    kappa = 0.0 if cfg.kappa is None else cfg.kappa
    tol = 1e-8 if cfg.tolerance is None else cfg.tolerance
    n = int(p.get("n_samples", 1000))
    rng = np.random.default_rng(cfg.seed)
    space, factor, radius = _model_sampler(kappa)
    base = _base_point(space)
    rows, agree = [], 0
    while len(rows) < n:
        pts = [space.sample_near(base, radius, rng) for _ in range(4)]
        d = lambda i, j: factor * float(space.distance(pts[i], pts[j]))  # noqa: E731
        cfg_ = AlexandrovConfig(d_pq=d(0, 1), d_qx=d(1, 2), d_qy=d(1, 3), d_py=d(0, 3), d_xy=d(2, 3))
        if min(cfg_.d_pq, cfg_.d_qx, cfg_.d_qy, cfg_.d_py) < 1e-3 * factor:
            continue
        if not _lemma_admissible(kappa, cfg_):
            continue
        defect, gap = alexandrov_compare(kappa, cfg_)
        ok = signs_agree(defect, gap, tol)
        agree += ok
        rows.append((len(rows), cfg_.d_pq, cfg_.d_qx, cfg_.d_qy, cfg_.d_py, cfg_.d_xy, defect, gap, ok))
    results = {"kappa": kappa, "n_samples": n, "agreements": agree, "tolerance": tol,
               "passed": agree == n}
    cols = ("index", "d_pq", "d_qx", "d_qy", "d_py", "d_xy", "defect_at_q", "angle_gap_at_p", "agree")
    return results, {"configurations": Table(cols, rows)}


def _property_check(cfg):
    space = _space(cfg)
    kappa = _kappa(cfg, space)
    hinge = _hinge(space, cfg.params)
    props = cfg.params.get("property", "A")
    props = ["A", "H", "D"] if props == "all" else [props] if isinstance(props, str) else list(props)
    grid = int(cfg.params.get("grid", 16))
    named = []
    for prop in props:
        if prop not in ("A", "H", "D"):
            raise UsageError(f"property must be A, H, D or 'all', got {prop!r}")
        named.append((prop, check_property(prop, kappa, space, hinge, grid=grid, tolerance=cfg.tolerance)))
    results = {"hinge": hinge.to_json(), "perimeter": hinge.perimeter(space),
               "verdicts": [v.to_json() for _, v in named]}
    return results, {"verdicts": _verdict_table(named)}


def _balanced_check(cfg):
    space = _space(cfg)
    kappa = _kappa(cfg, space)
    p = cfg.params
    base = _base_point(space, p.get("p"))
    if "q" in p:
        seg = space.segment(base, p["q"])
    else:
        seg = space.segment(base, space.exp(base, 0.0, float(p.get("length", 1.0))))
    if "probes" in p:
        probes = [(float(pr["t"]), space.validate(pr["y"])) for pr in p["probes"]]
    else:
        rng = np.random.default_rng(cfg.seed)
        radius = float(p.get("probe_radius", 0.5 * seg.length))
        probes = []
        while len(probes) < int(p.get("n_probes", 8)):
            t = float(rng.uniform(0.1, 0.9) * seg.length)
            y = space.sample_near(seg.point_at(t), radius, rng)
            if float(space.distance(seg.point_at(t), y)) > 1e-3 * radius:
                probes.append((t, y))
    tol = ANGLE_TOL if cfg.tolerance is None else cfg.tolerance
    v = check_balanced(space, seg, probes, tolerance=tol, kappa=kappa)
    results = {"segment": {"p": seg.p.tolist(), "q": seg.q.tolist(), "length": seg.length},
               "n_probes": len(probes), "verdict": v.to_json()}
    return results, {"verdicts": _verdict_table([("balanced", v)])}


def _curvature_estimate(cfg):
    space = _space(cfg)
    p = cfg.params
    base = _base_point(space, p.get("base_point"))
    bracket = tuple(p.get("kappa_bracket", (-5.0, 5.0)))
    est = estimate_curvature_floor(space, base, float(p.get("scale", 0.5)), kappa_bracket=bracket,
                                   n_hinges=int(p.get("n_hinges", 48)), grid=int(p.get("grid", 8)),
                                   seed=cfg.seed, width=float(p.get("width", 1e-2)))
    floor = space.curvature_floor
    results = {"estimate": est, "curvature_floor": floor, "base_point": base.tolist()}
    row = (est, "" if floor is None else floor)
    return results, {"estimate": Table(("estimate", "curvature_floor"), [row])}


def _thin_iteration(cfg):
    space = _space(cfg)
    kappa = _kappa(cfg, space)
    hinge = _hinge(space, cfg.params)
    trace = thin_hinge_iteration(kappa, space, hinge, n_max=cfg.n_max)
    results = {"trace": trace.to_json(), "final_gap": trace.final_gap, "n_steps": len(trace.steps) - 1,
               "a_margin": trace.a_margin}
    return results, {"trace": Table(TRACE_COLUMNS, trace.rows())}


def _globalize(cfg):
    space = _space(cfg)
    kappa = _kappa(cfg, space)
    hinge = _hinge(space, cfg.params)
    tol = ANGLE_TOL if cfg.tolerance is None else cfg.tolerance
    glob = globalize_check(kappa, space, hinge, tolerance=tol, n_max=cfg.n_max)
    direct = check_property("A", kappa, space, hinge, tolerance=tol)
    results = {"hinge": hinge.to_json(), "globalize": glob.to_json(), "direct": direct.to_json(),
               "agree": glob.passed == direct.passed}
    return results, {"verdicts": _verdict_table([("globalize", glob), ("direct", direct)])}


def _defect_descent(cfg):
    space = _space(cfg)
    kappa = _kappa(cfg, space)
    hinge = _hinge(space, cfg.params)
    tol = ANGLE_TOL if cfg.tolerance is None else cfg.tolerance
    trace = defect_descent(kappa, space, hinge, max_depth=int(cfg.params.get("max_depth", 40)),
                           tolerance=tol, n_max=cfg.n_max)
    results = {"trace": trace.to_json(), "levels": len(trace.hinges) - 1}
    cols = ["level", "perimeter", "a_margin"] + [f"vertex_{i}" for i in range(len(hinge.p))]
    rows = trace.rows()
    if isinstance(space, Cone):
        dist = [float(space.distance(h.p, space.apex)) for h, _, _ in trace.hinges]
        results["distance_to_apex"] = dist
        cols.append("distance_to_apex")
        rows = [(*r, d) for r, d in zip(rows, dist)]
    return results, {"descent": Table(tuple(cols), rows)}


SCENARIOS = {
    "trig-identities": _trig_identities,
    "triangle-solvers": _triangle_solvers,
    "alexandrov-lemma": _alexandrov_lemma,
    "property-check": _property_check,
    "balanced-check": _balanced_check,
    "curvature-estimate": _curvature_estimate,
    "thin-iteration": _thin_iteration,
    "globalize": _globalize,
    "defect-descent": _defect_descent,
}


def run_scenario(config):
    """Run one scenario; ``config`` is a :class:`ScenarioConfig` or a dict."""
    if not isinstance(config, ScenarioConfig):
        config = ScenarioConfig.from_dict(config)
    start = time.perf_counter()
    results, tables = SCENARIOS[config.scenario](config)
    return Report(config.to_json(), results, tables, wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- output


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _csv_text(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def emit_report(report, fmt="json", destination=None, include_timing=False):
    """Write ``report`` as one JSON object or as CSV tables.

    ``destination`` is a path or ``None`` for standard output.  For CSV
    with several tables and a path ``out.csv``, each table goes to
    ``out_<table>.csv``; on standard output tables are separated by a
    blank line and introduced by a ``# <table>`` line.  Returns the list
    of files written.
    """
    if fmt == "json":
        text = json.dumps(report.to_json(include_timing), indent=2, allow_nan=False) + "\n"
        if destination is None:
            sys.stdout.write(text)
            return []
        Path(destination).write_text(text)
        return [Path(destination)]
    if fmt != "csv":
        raise UsageError(f"unknown format {fmt!r}")
    tables = report.tables
    if destination is None:
        parts = []
        for name, table in tables.items():
            head = f"# {name}\n" if len(tables) > 1 else ""
            parts.append(head + _csv_text(table))
        sys.stdout.write("\n".join(parts))
        return []
    dest = Path(destination)
    written = []
    for name, table in tables.items():
        path = dest if len(tables) == 1 else dest.with_name(f"{dest.stem}_{name}{dest.suffix or '.csv'}")
        path.write_text(_csv_text(table))
        written.append(path)
    return written


def _parse_param(text):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise UsageError(f"--param expects KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def build_parser():
    ap = argparse.ArgumentParser(prog="curvbound", description=__doc__.split("\n\n")[0])
    ap.add_argument("--scenario", choices=sorted(SCENARIOS))
    ap.add_argument("--config", help="path to a JSON scenario configuration")
    ap.add_argument("--kappa", type=float, help="comparison curvature")
    ap.add_argument("--space", help='inline JSON space, e.g. \'{"space": "sphere", "radius": 1}\'')
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    ap.add_argument("--out", help="output path (default: standard output)")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tolerance", type=float)
    ap.add_argument("--n-max", type=int, dest="n_max")
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                    help="scenario parameter; VALUE is parsed as JSON when possible")
    ap.add_argument("--include-timing", action="store_true",
                    help="add wall time to JSON output (breaks byte-for-byte reproducibility)")
    ap.add_argument("--version", action="version", version=f"curvbound {__version__}")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        data = {}
        if args.config:
            try:
                data = json.loads(Path(args.config).read_text())
            except json.JSONDecodeError as exc:
                raise UsageError(f"config is not valid JSON: {exc}") from exc
            if not isinstance(data, dict):
                raise UsageError("config must be a JSON object")
        fmt = args.format or data.get("format", "json")
        for key in ("scenario", "kappa", "seed", "tolerance", "n_max"):
            if getattr(args, key) is not None:
                data[key] = getattr(args, key)
        if args.space is not None:
            try:
                data["space"] = json.loads(args.space)
            except json.JSONDecodeError:
                data["space"] = args.space
        params = dict(data.get("params", {}) or {})
        params.update(_parse_param(p) for p in args.param)
        data["params"] = params
        report = run_scenario(ScenarioConfig.from_dict(data))
        emit_report(report, fmt, args.out, include_timing=args.include_timing)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"curvbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CurvBoundError, ValueError) as exc:
        print(f"curvbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"curvbound: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
