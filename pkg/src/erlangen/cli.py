"""Command-line front-end.

Exit codes: 0 for success and passing verdicts (invariant / contact /
axioms-ok), 1 for failing verdicts (violated / not-contact /
axioms-failed) so CI can gate on invariance, 2 for usage or
configuration errors.  Every randomized verb requires an explicit
--seed (from the flag or a --config file); identical invocations
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .numerics import GeometryError
from .projective import ProjPoint
from .moebius import (
    SpherePoint,
    inverse_stereographic,
    stereographic,
    circle_quadric,
)
from .transfers import circle_to_coords, pluecker_embed
from .cayley_klein import ck_distance, klein_disk_metric, elliptic_metric
from .binary_forms import (
    BinaryForm,
    cubic_invariant_R,
    hessian,
    jacobian_covariant,
    quartic_invariants,
)
from .contact import (
    is_contact_transformation,
    legendre_map,
    prolong_point_map,
    swap_zp_map,
)
from .groups import (
    BUILTIN_GROUP_NAMES,
    Configuration,
    builtin_group,
    check_group_axioms,
    invariance_test,
    orbit_sample,
)
from .properties import PROPERTY_NAMES, builtin_property
from .config import ConfigError, load_config
from .reports import ValueReport, serialize_report, format_number

__all__ = ["main", "entrypoint", "builtin_property"]

_CONTACT_MAPS = ("legendre", "swap-zp", "prolonged-shear", "prolonged-quadratic")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erlangen",
        description="geometry-as-group computational kernel")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value config file with defaults")
        p.add_argument("--seed", type=int, default=None,
                       help="64-bit seed (required for randomized verbs)")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--dimension", type=int, default=None)

    p = sub.add_parser("check-invariance", help="randomized invariance check")
    p.add_argument("--group", required=True, choices=BUILTIN_GROUP_NAMES)
    p.add_argument("--property", required=True, dest="prop", choices=PROPERTY_NAMES)
    p.add_argument("--metric", choices=("klein-disk", "elliptic"))
    add_common(p)

    p = sub.add_parser("axioms", help="randomized group-axiom check")
    p.add_argument("--group", required=True, choices=BUILTIN_GROUP_NAMES)
    add_common(p)

    p = sub.add_parser("distance", help="projective measurement of a point pair")
    p.add_argument("--metric", required=True, choices=("klein-disk", "elliptic"))
    p.add_argument("--p", required=True, help="x,y")
    p.add_argument("--q", required=True, help="x,y")

    p = sub.add_parser("transfer", help="apply a transfer map")
    p.add_argument("--kind", required=True,
                   choices=("stereographic", "inverse-stereographic",
                            "pluecker", "circle-coords"))
    p.add_argument("--point", help="x,y,z sphere point (stereographic)")
    p.add_argument("--z", help="re,im plane value (inverse-stereographic)")
    p.add_argument("--a", help="x0,x1,x2,x3 first space point (pluecker)")
    p.add_argument("--b", help="x0,x1,x2,x3 second space point (pluecker)")
    p.add_argument("--center", help="re,im circle center (circle-coords)")
    p.add_argument("--radius", type=float, help="circle radius (circle-coords)")
    p.add_argument("--orientation", type=int, default=1, choices=(-1, 1))

    p = sub.add_parser("covariants", help="covariants/invariants of a binary form")
    p.add_argument("--coeffs", required=True,
                   help="comma-separated coefficients, e.g. 1,0,0,-1 (complex ok)")

    p = sub.add_parser("contact-check", help="contact-transformation verification")
    p.add_argument("--map", required=True, dest="map_name", choices=_CONTACT_MAPS)
    p.add_argument("--samples", type=int, default=None)
    add_common(p)

    p = sub.add_parser("orbit", help="sample the orbit of a configuration")
    p.add_argument("--group", required=True, choices=BUILTIN_GROUP_NAMES)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--point", help="x,y[,z] configuration point")
    p.add_argument("--circle", help="cx,cy,r configuration circle")
    add_common(p)

    return parser


def _floats(text: str, expect: int, what: str) -> list:
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise GeometryError(f"{what}: expected comma-separated numbers, got {text!r}")
    if len(vals) != expect:
        raise GeometryError(f"{what}: expected {expect} numbers, got {len(vals)}")
    return vals


def _merge_defaults(args):
    """Flag > config file > hard default, with seed mandatory."""
    cfg = load_config(args.config) if getattr(args, "config", None) else None
    if getattr(args, "seed", None) is None and cfg is not None:
        args.seed = cfg.seed
    if getattr(args, "trials", None) is None:
        args.trials = cfg.trials if cfg is not None else 100
    if getattr(args, "tol", None) is None:
        args.tol = cfg.tolerance if cfg is not None else 1e-9
    if getattr(args, "dimension", None) is None:
        args.dimension = cfg.dimension if cfg is not None else 2
    if getattr(args, "group", None) is None and cfg is not None:
        args.group = cfg.group
    return args


def _require_seed(args):
    if args.seed is None:
        raise GeometryError("randomized commands require an explicit --seed "
                            "(flag or config file)")


def _run_check_invariance(args) -> int:
    _merge_defaults(args)
    _require_seed(args)
    prop = builtin_property(args.prop, dimension=args.dimension, metric=args.metric)
    group = builtin_group(args.group, args.dimension)
    verdict = invariance_test(prop.evaluate, group, prop.sample_config,
                              seed=args.seed, trials=args.trials, tol=args.tol)
    sys.stdout.write(serialize_report(verdict))
    return 0 if verdict.invariant else 1


def _run_axioms(args) -> int:
    # axiom checks default to the looser 1e-8 membership tolerance unless
    # a flag or config value overrides it
    explicit_tol = args.tol
    _merge_defaults(args)
    _require_seed(args)
    group = builtin_group(args.group, args.dimension)
    tol = explicit_tol if explicit_tol is not None else (
        args.tol if args.config else 1e-8)
    report = check_group_axioms(group, seed=args.seed, trials=args.trials, tol=tol)
    sys.stdout.write(serialize_report(report))
    return 0 if report.ok else 1


def _run_distance(args) -> int:
    px, py = _floats(args.p, 2, "--p")
    qx, qy = _floats(args.q, 2, "--q")
    metric = klein_disk_metric() if args.metric == "klein-disk" else elliptic_metric()
    value = ck_distance(ProjPoint([px, py, 1.0]), ProjPoint([qx, qy, 1.0]), metric)
    shown = abs(value)
    report = ValueReport("distance", [("metric", args.metric),
                                      ("value", shown)])
    sys.stdout.write(serialize_report(report))
    return 0


def _run_transfer(args) -> int:
    if args.kind == "stereographic":
        if not args.point:
            raise GeometryError("stereographic requires --point x,y,z")
        x, y, z = _floats(args.point, 3, "--point")
        w = stereographic(SpherePoint(x, y, z))
        value = "inf" if w.infinite else format_number(w.value)
        report = ValueReport("transfer", [("kind", "stereographic"),
                                          ("value", value)])
    elif args.kind == "inverse-stereographic":
        if not args.z:
            raise GeometryError("inverse-stereographic requires --z re,im")
        re, im = _floats(args.z, 2, "--z")
        p = inverse_stereographic(complex(re, im))
        report = ValueReport("transfer", [("kind", "inverse-stereographic"),
                                          ("x", p.x), ("y", p.y), ("z", p.z)])
    elif args.kind == "pluecker":
        if not args.a or not args.b:
            raise GeometryError("pluecker requires --a and --b (4 numbers each)")
        a = ProjPoint(_floats(args.a, 4, "--a"))
        b = ProjPoint(_floats(args.b, 4, "--b"))
        line = pluecker_embed(a, b)
        fields = [("kind", "pluecker")]
        fields += [(f"p{i}", line.p[i]) for i in range(6)]
        report = ValueReport("transfer", fields)
    else:
        if args.center is None or args.radius is None:
            raise GeometryError("circle-coords requires --center re,im and --radius r")
        re, im = _floats(args.center, 2, "--center")
        coords = circle_to_coords(complex(re, im), args.radius, args.orientation)
        fields = [("kind", "circle-coords")]
        fields += [(f"u{i+1}", coords.u[i]) for i in range(5)]
        report = ValueReport("transfer", fields)
    sys.stdout.write(serialize_report(report))
    return 0


def _run_covariants(args) -> int:
    try:
        coeffs = [complex(tok.strip().replace(" ", "")) for tok in args.coeffs.split(",")]
    except ValueError:
        raise GeometryError(f"--coeffs: cannot parse {args.coeffs!r}")
    form = BinaryForm(coeffs)
    if form.degree == 3:
        h = hessian(form)
        q = jacobian_covariant(form, h)
        fields = [("degree", 3), ("discriminant", cubic_invariant_R(form))]
        fields += [(f"hessian_{i}", h.coeffs[i]) for i in range(len(h.coeffs))]
        fields += [(f"jacobian_{i}", q.coeffs[i]) for i in range(len(q.coeffs))]
    elif form.degree == 4:
        inv_i, inv_j = quartic_invariants(form)
        h = hessian(form)
        t = jacobian_covariant(form, h)
        fields = [("degree", 4), ("i", inv_i), ("j", inv_j)]
        fields += [(f"hessian_{i}", h.coeffs[i]) for i in range(len(h.coeffs))]
        fields += [(f"sextic_{i}", t.coeffs[i]) for i in range(len(t.coeffs))]
    else:
        raise GeometryError("covariants verb handles cubics and quartics")
    sys.stdout.write(serialize_report(ValueReport("covariants", fields)))
    return 0


def _contact_map(name: str):
    if name == "legendre":
        return legendre_map()
    if name == "swap-zp":
        return swap_zp_map()
    if name == "prolonged-shear":
        shear = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        return prolong_point_map(lambda w: shear @ w, lambda w: shear)
    # prolonged-quadratic: a nonlinear point transformation
    def f(w):
        return np.array([w[0] + 0.2 * w[1] ** 2, w[1], w[2] + 0.1 * w[0] * w[1]])

    def jac(w):
        return np.array([[1.0, 0.4 * w[1], 0.0],
                         [0.0, 1.0, 0.0],
                         [0.1 * w[1], 0.1 * w[0], 1.0]])

    return prolong_point_map(f, jac)


def _run_contact_check(args) -> int:
    _merge_defaults(args)
    _require_seed(args)
    samples = args.samples if args.samples is not None else 40
    tol = args.tol if args.tol is not None else 1e-6
    verdict = is_contact_transformation(_contact_map(args.map_name),
                                        seed=args.seed, samples=samples, tol=tol)
    sys.stdout.write(serialize_report(verdict))
    return 0 if verdict.is_contact else 1


def _run_orbit(args) -> int:
    _merge_defaults(args)
    _require_seed(args)
    count = args.count if args.count is not None else 10
    if args.circle:
        cx, cy, r = _floats(args.circle, 3, "--circle")
        config = Configuration([circle_quadric(complex(cx, cy), r)])
    elif args.point:
        vals = [float(t) for t in args.point.split(",")]
        if len(vals) != args.dimension:
            raise GeometryError(f"--point needs {args.dimension} coordinates")
        config = Configuration([ProjPoint(vals + [1.0])])
    else:
        raise GeometryError("orbit requires --point or --circle")
    group = builtin_group(args.group, args.dimension)
    images = orbit_sample(config, group, seed=args.seed, count=count)
    fields = [("group", args.group), ("count", count)]
    for i, img in enumerate(images):
        el = img[0]
        if isinstance(el, ProjPoint):
            desc = ":".join(format_number(z) for z in el.normalized())
        else:
            desc = ",".join(format_number(z) for z in el.matrix.ravel())
        fields.append((f"image_{i}", desc))
    sys.stdout.write(serialize_report(ValueReport("orbit", fields)))
    return 0


_RUNNERS = {
    "check-invariance": _run_check_invariance,
    "axioms": _run_axioms,
    "distance": _run_distance,
    "transfer": _run_transfer,
    "covariants": _run_covariants,
    "contact-check": _run_contact_check,
    "orbit": _run_orbit,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already written the usage message
        return int(exc.code) if exc.code else 0
    try:
        return _RUNNERS[args.verb](args)
    except (GeometryError, ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
