"""Command-line front end: every report is a JSON document.

    wonderbt roots A2 --star swap
    wonderbt wonderful A2 --anisotropic a1 a2
    wonderbt apartment --example swap
    wonderbt theta --poly f.json --points pts.json
    wonderbt building barbs --n 3 --p 2 --radius 1
    wonderbt building flow --example17 --steps 5
    wonderbt building distance --n 3 --p 2

Exit status: 0 success, 1 internal error, 2 configuration or contract error.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import __version__
from .errors import ConfigurationError, WonderError
from .rootsys import (
    build_root_system,
    diagram_automorphisms,
    generate_group,
    lambda_tau,
    opposition_involution,
    root_name,
)

DEFAULTS = {
    "q": "2",
    "p": 2,
    "n": 3,
    "radius": None,
    "steps": 5,
    "basepoint": None,
    "method": "descent",
}


@dataclass
class RunConfig:
    command: str
    verb: str = None
    root_system: str = None
    star: list = None
    anisotropic: list = None
    index: str = None
    q: Fraction = Fraction(2)
    p: int = 2
    n: int = 3
    radius: int = None
    steps: int = 5
    out: str = None
    cache_dir: str = None
    extra: dict = None

    def validate(self):
        if self.q <= 1:
            raise ConfigurationError("--q must be > 1")
        if self.p < 2:
            raise ConfigurationError("--p must be a prime")
        if self.steps < 0:
            raise ConfigurationError("--steps must be >= 0")
        if self.radius is not None and self.radius < 0:
            raise ConfigurationError("--radius must be >= 0")
        if self.index and not Path(self.index).exists():
            raise ConfigurationError(f"Tits index file {self.index} does not exist")


def _fr(x):
    return str(Fraction(x))


def _names(indices):
    return [f"a{i + 1}" for i in sorted(indices)]


# -- roots --------------------------------------------------------------------

def _star_group(rs, star):
    if not star:
        return [diagram_automorphisms(rs)[0]]
    if star == ["swap"] or star == "swap":
        autos = diagram_automorphisms(rs)
        if len(autos) < 2:
            raise ConfigurationError(f"{rs.name} has no nontrivial diagram automorphism")
        return generate_group(autos[1:], rs.rank)
    raise ConfigurationError(f"unknown --star value {star!r} (use 'swap')")


def cmd_roots(cfg):
    from .rootsys import star_on_subset
    from .wonderful import all_subsets

    rs = build_root_system(cfg.root_system)
    table = []
    for tau in all_subsets(rs.rank):
        lam = lambda_tau(rs, tau)
        table.append({
            "tau": _names(tau),
            "coroot_coords": [_fr(x) for x in lam.coords],
            "pairings": [_fr(x) for x in rs.coweight_pairings(lam)],
            "opposite_type": _names(opposition_involution(rs, tau)),
        })
    group = _star_group(rs, cfg.star)
    orbits, seen = [], set()
    for i in range(rs.rank):
        if i in seen:
            continue
        orb = set()
        for g in group:
            orb |= star_on_subset(rs, g, {i})
        seen |= orb
        orbits.append(_names(orb))
    return {
        "type": rs.name,
        "rank": rs.rank,
        "cartan_matrix": [list(r) for r in rs.cartan_matrix],
        "positive_roots": [root_name(r) for r in rs.positive_roots],
        "num_roots": len(rs.roots),
        "weyl_order": len(rs.weyl_group),
        "lambda_tau": table,
        "star_orbits": orbits,
    }


# -- wonderful ----------------------------------------------------------------

def _tits_index(cfg):
    from .wonderful import tits_index_from_json

    if cfg.index:
        try:
            data = json.loads(Path(cfg.index).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"Tits index file is not valid JSON: {exc}") from exc
        return tits_index_from_json(data)
    if not cfg.root_system:
        raise ConfigurationError("a root system (positional) or --index is required")
    return tits_index_from_json({
        "type": cfg.root_system,
        "star": cfg.star or [],
        "anisotropic": cfg.anisotropic or [],
    })


def cmd_wonderful(cfg):
    from .wonderful import (
        adjoint_rep,
        check_star_orbit_identity,
        covering_relations,
        orbit_lattice,
        rational_boundary_orbits,
    )

    index = _tits_index(cfg)
    rs = index.root_system
    orbits = orbit_lattice(rs)
    rep = adjoint_rep(rs)
    autos = diagram_automorphisms(rs)
    identity_matrix = []
    for g in autos:
        row = {"gamma": [list(r) for r in g.matrix], "results": {}}
        for o in orbits:
            key = ",".join(_names(o.tau)) or "-"
            row["results"][key] = check_star_orbit_identity(rs, rep, g, o.tau)
        identity_matrix.append(row)
    rational = rational_boundary_orbits(index)
    return {
        "type": rs.name,
        "orbits": [o.to_json() for o in orbits],
        "closure_covers": [[_names(a), _names(b)] for a, b in covering_relations(orbits)],
        "tits_index": {
            "star_orbits": [_names(o) for o in index.star_orbits()],
            "anisotropic": _names(index.anisotropic),
        },
        "rational_boundary_orbits": [_names(t) for t in rational],
        "num_rational_boundary_orbits": len(rational),
        "star_identity": identity_matrix,
    }


# -- apartment ----------------------------------------------------------------

def _pipeline_from_json(data, q):
    from .apartment import (
        AffineGaloisAction,
        FiberSpec,
        affine_from_automorphism,
        point_from_json,
        trivial_action,
    )
    from .rootsys import Coweight, FUNDAMENTAL, LatticeAutomorphism

    try:
        rs = build_root_system(data["type"])
        x0 = point_from_json({"q": str(q), **data["x0"]}, rs.rank)
        target = point_from_json({"q": str(q), **data["target"]}, rs.rank)
    except KeyError as exc:
        raise ConfigurationError(f"pipeline JSON is missing {exc}") from exc
    tau = target.tau
    gens = []
    for g in data.get("action", []):
        if g == "swap":
            gens.extend(affine_from_automorphism(a) for a in diagram_automorphisms(rs)[1:])
        else:
            try:
                aut = LatticeAutomorphism(tuple(tuple(int(v) for v in r) for r in g["matrix"]))
                tr = [Fraction(str(t)) for t in g.get("translation", [0] * rs.rank)]
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigurationError(f"bad action generator {g!r}") from exc
            gens.append(affine_from_automorphism(aut, tr))
    action = AffineGaloisAction(tuple(gens)) if gens else trivial_action(rs.rank)
    if "lambda" in data:
        lam = rs.to_coroot_basis(Coweight(tuple(Fraction(str(v)) for v in data["lambda"]), FUNDAMENTAL))
    else:
        lam = lambda_tau(rs, tau)
    return rs, x0, action, FiberSpec(tau, target), lam, int(data.get("steps", 5))


EXAMPLE_PIPELINES = {
    "trivial": {
        "type": "A2",
        "x0": {"coords": {"a1": "8", "a2": "1/2"}},
        "target": {"tau": ["a1"], "coords": {"a2": "4"}},
    },
    "swap": {
        "type": "A3",
        "x0": {"coords": {"a1": "2", "a2": "1/4", "a3": "128"}},
        "target": {"tau": ["a1", "a3"], "coords": {"a2": "4"}},
        "action": ["swap"],
    },
    # diag(t^2, t^-4, t^2) conjugated into the dominant chamber: pairings (0, 6)
    "example17": {
        "type": "A2",
        "x0": {"coords": {"a1": "8", "a2": "1/2"}},
        "target": {"tau": ["a2"], "coords": {"a1": "8"}},
        "lambda": [0, 6],
    },
}


def cmd_apartment(cfg):
    from .apartment import theorem16_pipeline

    extra = cfg.extra or {}
    if extra.get("input"):
        try:
            data = json.loads(Path(extra["input"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read pipeline input: {exc}") from exc
        cases = {"input": data}
    else:
        names = [extra["example"]] if extra.get("example") else sorted(EXAMPLE_PIPELINES)
        cases = {k: EXAMPLE_PIPELINES[k] for k in names}
    reports = {}
    for name, data in cases.items():
        rs, x0, action, fiber, lam, steps = _pipeline_from_json(data, cfg.q)
        rep = theorem16_pipeline(x0, action, fiber, lam, rs, steps=steps if "steps" in data else cfg.steps)
        reports[name] = {"type": rs.name, "group_order": action.order, **rep.to_json(cfg.q)}
    return {"q": str(cfg.q), "pipelines": reports}


# -- theta --------------------------------------------------------------------

EXAMPLE_THETA = {
    "poly": {
        "type": "A2",
        "monomials": [
            {"exps": {"-a1": 1}, "norm": "1"},
            {"exps": {"-a1-a2": 1, "a2": 1}, "norm": "1/2"},
        ],
    },
    "points": {
        "x": {"coords": {"a1": "1", "a2": "1"}},
        "y": [
            {"coords": {"a1": "1", "a2": "1"}},
            {"coords": {"a1": "1/4", "a2": "2"}},
            {"tau": ["a1"], "coords": {"a2": "2"}},
            {"tau": ["a1"], "coords": {"a2": "8"}},
        ],
    },
}


def cmd_theta(cfg):
    from .apartment import point_from_json
    from .theta import gauss_norm, poly_from_json, separating_form, theta_eval

    extra = cfg.extra or {}

    def load(key):
        if extra.get(key):
            try:
                return json.loads(Path(extra[key]).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigurationError(f"cannot read {key} file: {exc}") from exc
        return EXAMPLE_THETA[key]

    pdata, points = load("poly"), load("points")
    f = poly_from_json(pdata)
    rs = f.root_system
    q = Fraction(str(points.get("q", cfg.q)))
    x = point_from_json({"q": str(q), **points["x"]}, rs.rank)
    ys = [point_from_json({"q": str(q), **y}, rs.rank) for y in points.get("y", [])]
    evals = [{"y": y.to_json(), "value": _fr(theta_eval(f, x, y))} for y in ys]
    seps = []
    for (i, a), (j, b) in combinations(enumerate(ys), 2):
        if a.tau == b.tau and a != b:
            s = separating_form(a, b, rs, x=x)
            seps.append({"pair": [i, j], **s.to_json()})
    return {
        "type": rs.name,
        "q": str(q),
        "gauss_norm": _fr(gauss_norm(f)),
        "evaluations": evals,
        "separations": seps,
    }


# -- building -----------------------------------------------------------------

def _layer_cache(cfg):
    from .cache import LayerCache, default_cache_dir

    d = default_cache_dir(cfg.cache_dir)
    return LayerCache(d) if d else None


def _vertex_arg(text, p, n):
    from .building import vertex
    from .padic import parse_quad

    try:
        rows = json.loads(text)
        cols = list(zip(*[[parse_quad(str(x), p) for x in row] for row in rows]))
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ConfigurationError(f"cannot parse vertex {text!r}: {exc}") from exc
    if len(cols) != n or any(len(c) != n for c in cols):
        raise ConfigurationError(f"vertex must be an {n}x{n} matrix")
    return vertex(cols, p)


def _basepoint(cfg, name):
    from .building import diagonal_vertex, standard_vertex

    n, p = cfg.n, cfg.p
    if name in (None, "alcove"):
        return diagonal_vertex((0,) * (n - 1) + (1,), p)
    if name == "standard":
        return standard_vertex(n, p)
    return _vertex_arg(name, p, n)


def cmd_building(cfg):
    from .building import (
        _check_n,
        _check_p,
        barb_search,
        boundary_flow,
        boundary_flow_json,
        divisor_distance,
        elementary_divisors,
        example_barb_vertex,
        graph_distance,
        standard_vertex,
        diagonal_vertex,
    )

    extra = cfg.extra or {}
    _check_n(cfg.n)
    _check_p(cfg.p)
    if cfg.verb == "barbs":
        radius = cfg.radius if cfg.radius is not None else 1
        cache = _layer_cache(cfg)
        base = _basepoint(cfg, extra.get("basepoint"))
        report = barb_search(cfg.n, cfg.p, radius, basepoint=base, layer_cache=cache,
                             method=extra.get("method") or "descent")
        return report.to_json()
    if cfg.verb == "flow":
        if extra.get("example17") or not extra.get("vertex"):
            if cfg.n != 3:
                raise ConfigurationError("the default flow vertex lives in n = 3")
            v = example_barb_vertex(cfg.p)
        else:
            v = _vertex_arg(extra["vertex"], cfg.p, cfg.n)
        lam = extra.get("lam") or "1,-2,1"
        try:
            lam = tuple(int(c) for c in str(lam).split(","))
        except ValueError as exc:
            raise ConfigurationError(f"--lambda must be comma separated integers, got {lam!r}") from exc
        out = boundary_flow_json(boundary_flow(v, lam, cfg.steps))
        return {"p": cfg.p, "n": v.n, "start": v.to_json(), **out}
    if cfg.verb == "distance":
        v1 = _vertex_arg(extra["v1"], cfg.p, cfg.n) if extra.get("v1") else standard_vertex(cfg.n, cfg.p)
        v2 = _vertex_arg(extra["v2"], cfg.p, cfg.n) if extra.get("v2") else \
            diagonal_vertex(tuple(range(cfg.n)), cfg.p)
        cap = cfg.radius if cfg.radius is not None else 4
        bfs = graph_distance(v1, v2, cap)
        return {
            "p": cfg.p,
            "n": cfg.n,
            "v1": v1.to_json(),
            "v2": v2.to_json(),
            "elementary_divisors": list(elementary_divisors(v1, v2)),
            "formula_distance": divisor_distance(v1, v2),
            "bfs_distance": bfs if bfs is not None else "exceeds cap",
            "radius_cap": cap,
        }
    raise ConfigurationError(f"unknown building verb {cfg.verb!r}")


COMMANDS = {
    "roots": cmd_roots,
    "wonderful": cmd_wonderful,
    "apartment": cmd_apartment,
    "theta": cmd_theta,
    "building": cmd_building,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file of option defaults")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--cache-dir", help="BFS layer cache (overridden by $WONDERBT_CACHE_DIR)")
    common.add_argument("--q", help="multiplicative base of the apartment (rational > 1)")
    common.add_argument("--p", type=int, help="residue characteristic")
    common.add_argument("--n", type=int, help="SL_n rank of the building")
    common.add_argument("--radius", type=int, help="BFS radius / distance cap")
    common.add_argument("--steps", type=int, help="flow steps")

    parser = argparse.ArgumentParser(prog="wonderbt", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", parents=[common], help="root data and lambda_tau table")
    p.add_argument("root_system", nargs="?", help="e.g. A2, B3, D4, G2")
    p.add_argument("--star", nargs="*", help="'swap' for the diagram automorphisms")

    p = sub.add_parser("wonderful", parents=[common], help="orbit lattice and rational boundary orbits")
    p.add_argument("root_system", nargs="?")
    p.add_argument("--index", help="Tits index JSON file")
    p.add_argument("--star", nargs="*")
    p.add_argument("--anisotropic", nargs="*", help="simple roots of the anisotropic kernel, e.g. a1 a2")

    p = sub.add_parser("apartment", parents=[common], help="fixed-point pipeline on an apartment")
    p.add_argument("--input", help="pipeline JSON file")
    p.add_argument("--example", choices=sorted(EXAMPLE_PIPELINES))

    p = sub.add_parser("theta", parents=[common], help="seminorm evaluations and separations")
    p.add_argument("--poly", help="polynomial JSON file")
    p.add_argument("--points", help="points JSON file: {x: point, y: [points]}")

    p = sub.add_parser("building", parents=[common], help="lattice model of the building")
    verbs = p.add_subparsers(dest="verb", required=True)
    b = verbs.add_parser("barbs", parents=[common])
    b.add_argument("--basepoint", help="'alcove' (default), 'standard', or a JSON matrix")
    b.add_argument("--method", choices=["descent", "enumerate"])
    f = verbs.add_parser("flow", parents=[common])
    f.add_argument("--example17", action="store_true")
    f.add_argument("--vertex", help="JSON matrix of column generators")
    f.add_argument("--lambda", dest="lam", help="comma separated integers, default 1,-2,1")
    d = verbs.add_parser("distance", parents=[common])
    d.add_argument("--v1")
    d.add_argument("--v2")
    return parser


def _merge_config(args):
    values = vars(args).copy()
    values.setdefault("config", None)
    if values["config"]:
        try:
            data = json.loads(Path(values["config"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {values['config']}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config file must hold a JSON object")
        for key, val in data.items():
            key = key.replace("-", "_")
            if values.get(key) is None:
                values[key] = val
    for key, val in DEFAULTS.items():
        if values.get(key) is None:
            values[key] = val
    try:
        cfg = RunConfig(
            command=values["command"],
            verb=values.get("verb"),
            root_system=values.get("root_system") or values.get("type"),
            star=values.get("star"),
            anisotropic=values.get("anisotropic"),
            index=values.get("index"),
            q=Fraction(str(values["q"])),
            p=int(values["p"]),
            n=int(values["n"]),
            radius=None if values.get("radius") is None else int(values["radius"]),
            steps=int(values["steps"]),
            out=values.get("out"),
            cache_dir=values.get("cache_dir"),
        )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad option value: {exc}") from exc
    known = set(RunConfig.__dataclass_fields__)
    cfg.extra = {k: v for k, v in values.items() if k not in known}
    cfg.validate()
    return cfg


def render(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run(argv=None):
    """Parse, dispatch and return ``(exit_code, text)``; never raises for user errors."""
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        text = render(COMMANDS[cfg.command](cfg))
    except WonderError as exc:
        return 2, f"error: {exc}\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
        return 0, ""
    return 0, text


def main(argv=None):
    try:
        code, text = run(argv)
    except SystemExit as exc:
        return exc.code
    except Exception as exc:  # noqa: BLE001 - last-resort handler
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
