"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for input errors (bad manifest, unknown names, expressions outside the
supported class).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

from . import __version__
from . import bundle as bdl
from . import catalog as cat
from .forms import DifferentialForm
from .invariance import pullback_check
from .lie import JacobiError, invariant_distribution, invariant_involutive, invariant_reeb_properties
from .manifest import ManifestError, load, parse_form
from .pair import (
    NoFrameError,
    check_reeb_properties,
    class_dimension_check,
    derive_frame,
    involutivity_check,
    legendrian_check,
    reeb_fields,
    reeb_flow_invariance,
    verify,
)
from .parse import ParseError
from .report import NUMERIC_FAIL, NUMERIC_PASS, SYMBOLIC_FAIL, SYMBOLIC_PASS, Condition, VerificationReport
from .scalar import ExpressionClassError

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ----------------------------------------------------------------------------
# helpers


def _settings(args, manifest=None) -> dict:
    s = dict(manifest.settings) if manifest is not None else {}
    out = {
        "grid": int(s.get("grid", 17)),
        "tol": float(s.get("tol", 1e-9)),
        "seed": int(s.get("seed", 42)),
        "region": tuple(s.get("region", (-1.0, 1.0))),
    }
    for key in ("grid", "tol", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def _reeb_json(rp) -> dict:
    return {
        "alpha": [str(c) for c in rp.alpha.numerator.components],
        "eta": [str(c) for c in rp.eta.numerator.components],
        "alpha_denominator": str(rp.alpha.denominator),
        "eta_denominator": str(rp.eta.denominator),
        "exact": rp.exact,
    }


def _emit(args, command: str, body: dict, reports: list, text: str | None = None) -> int:
    passed = all(r.passed for r in reports)
    body = dict(body)
    body["passed"] = passed
    body["reports"] = [r.to_dict() for r in reports]
    doc = {
        "header": {
            "command": command,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
        },
        "body": body,
    }
    if getattr(args, "report", None):
        Path(args.report).write_text(render_json(doc))
    if not getattr(args, "quiet", False):
        print(text if text is not None else "\n".join(r.summary() for r in reports))
        print("PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def render_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


# ----------------------------------------------------------------------------
# subcommands


def _run_checks(m, args, s) -> tuple:
    """Execute the manifest's check list; returns (reports, extra body)."""
    checks = m.checks or [{"check": "verify"}]
    reports, extra = [], {}
    for chk in checks:
        kind = chk["check"]
        if kind == "pullback":
            reports.append(pullback_check(m.map(_need(chk, "map")), m.form(_need(chk, "form")),
                                          f"{chk['map']}^*{chk['form']}"))
            continue
        cp = m.pair(chk.get("pair"))
        if kind == "verify":
            reports.append(verify(cp, s["grid"], s["tol"], s["seed"], s["region"]))
        elif kind == "reeb":
            rp = reeb_fields(cp)
            extra.setdefault("reeb", {})[cp.name] = _reeb_json(rp)
            reports.append(check_reeb_properties(cp, rp))
        elif kind == "distributions":
            reports.append(class_dimension_check(cp, int(chk.get("points", 50)), s["seed"]))
        elif kind == "involutivity":
            which = chk.get("which", "alpha")
            frame = m.frames.get(cp.name, {}).get(which) or derive_frame(cp, which)
            if not frame:
                raise InputError(f"no frame available for the {which} distribution of {cp.name}")
            reports.append(involutivity_check(cp, which, frame, tol=s["tol"], seed=s["seed"]))
        elif kind == "legendrian":
            reports.append(legendrian_check(cp, m.curve(_need(chk, "curve")), chk.get("wrt", "alpha"),
                                            int(chk.get("samples", 33)), s["tol"]))
        elif kind == "flow":
            dev = reeb_flow_invariance(cp, seed=s["seed"])
            worst = max(dev.values())
            reports.append(VerificationReport(f"{cp.name}:flow", [Condition(
                "reeb_flow_invariance", NUMERIC_PASS if worst < cat.FLOW_TOL else NUMERIC_FAIL,
                tol=cat.FLOW_TOL, detail={k: float(f"{v:.3e}") for k, v in sorted(dev.items())})]))
    return reports, extra


def _need(chk: dict, key: str):
    if key not in chk:
        raise InputError(f"check {chk['check']!r} needs a {key!r} entry")
    return chk[key]


def cmd_verify(args) -> int:
    m = load(args.manifest)
    s = _settings(args, m)
    reports, extra = [], {}
    if m.algebra_pair is not None:
        ip = m.algebra_pair
        reports.append(ip.check())
        if reports[0].passed:
            reports.append(invariant_reeb_properties(ip))
            conds = []
            for which, expected in (("alpha", 2 * ip.k + 1), ("eta", 2 * ip.h + 1)):
                dim = len(invariant_distribution(ip, which))
                conds.append(Condition(f"dim_ker_{which}", SYMBOLIC_PASS if dim == expected else SYMBOLIC_FAIL,
                                       detail={"expected": expected, "observed": dim}))
                conds.append(Condition(f"involutive_{which}",
                                       SYMBOLIC_PASS if invariant_involutive(ip, which) else SYMBOLIC_FAIL))
            reports.append(VerificationReport(f"{ip.name}:distributions", conds))
    if m.chart is not None and (m.pairs or m.checks):
        more, extra = _run_checks(m, args, s)
        reports.extend(more)
    if not reports:
        raise InputError("nothing to verify: declare a pair, an algebra pair or checks")
    return _emit(args, "verify", {"settings": _jsonable(s), **extra}, reports)


def cmd_reeb(args) -> int:
    m = load(args.manifest)
    cp = m.pair(args.pair)
    rp = reeb_fields(cp)
    report = check_reeb_properties(cp, rp)
    lines = [f"X_alpha = {rp.alpha.numerator}" + ("" if rp.alpha.exact else f"  / ({rp.alpha.denominator})"),
             f"X_eta   = {rp.eta.numerator}" + ("" if rp.eta.exact else f"  / ({rp.eta.denominator})"),
             report.summary()]
    return _emit(args, "reeb", {"pair": cp.name, "reeb": _reeb_json(rp)}, [report], "\n".join(lines))


def cmd_legendrian(args) -> int:
    m = load(args.manifest)
    s = _settings(args, m)
    cp = m.pair(args.pair)
    report = legendrian_check(cp, m.curve(args.curve), args.wrt, args.samples, s["tol"])
    return _emit(args, "legendrian", {"pair": cp.name, "curve": args.curve, "wrt": args.wrt}, [report])


def cmd_pullback(args) -> int:
    m = load(args.manifest)
    report = pullback_check(m.map(args.map), m.form(args.form), f"{args.map}^*{args.form}")
    return _emit(args, "pullback-check", {"map": args.map, "form": args.form}, [report])


def cmd_catalog(args) -> int:
    if args.action == "list":
        if not args.quiet:
            for e in cat.entries():
                print(f"{e.id + e.signature:<28} [{e.kind}] {e.description}")
        if args.report:
            body = {"entries": [{"id": e.id, "signature": e.signature, "kind": e.kind,
                                 "description": e.description, "topic": e.topic} for e in cat.entries()]}
            Path(args.report).write_text(render_json({"header": {"command": "catalog list"}, "body": body}))
        return EXIT_PASS
    if not args.id:
        raise InputError("catalog run needs an example id")
    s = _settings(args)
    result = cat.run(args.id, s["grid"], s["tol"], s["seed"], flow=not args.no_flow)
    body = {k: v for k, v in result.to_dict().items() if k != "reports"}
    body["settings"] = _jsonable(s)
    return _emit(args, f"catalog run {args.id}", body, result.reports, result.summary())


def _load_area(text: str | None):
    """A base 2-form from inline JSON, a JSON file, or an area coefficient expression."""
    if text is None:
        return DifferentialForm.zero(bdl.BASE, 2)
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
    elif Path(text).is_file():
        data = json.loads(Path(text).read_text())
    else:
        return bdl.area_form(text)
    return parse_form(data, bdl.BASE, "curvature form")


def cmd_construct(args) -> int:
    s = _settings(args)
    o1, o2 = _load_area(args.omega1), _load_area(args.omega2)
    r = None
    if args.case == "full":
        bd = bdl.construct_sigma_full()
        report = bdl.check_conditions(bd, s["grid"], s["tol"])
        sset = bdl.classify_singular_set(bdl.singular_function(bd))
        report.extra["singular_set"] = sset.to_dict()
    elif args.case == "empty":
        bd, report = bdl.construct_sigma_empty(o1, o2, s["grid"], s["tol"])
    else:
        spec = bdl.SingularSetSpec.circles(args.circles or "0,pi", args.signs)
        g = None if args.g is None else [x.strip() for x in args.g.split(",")]
        bd, r, report = bdl.construct_sigma_circles(spec, o1, o2, args.k1, args.k2, s["grid"], s["tol"], g=g)
    reports = [report]
    if bd.flat:
        reports.append(bdl.verify_assembled(bd, s["grid"], s["tol"]))
    body = {"case": args.case, "bundle": bd.to_dict(), "settings": _jsonable(s)}
    if r is not None:
        body["r"] = r
    if args.out:
        doc = {"bundle": bd.to_dict(), "r": r, "report": [x.to_dict() for x in reports]}
        Path(args.out).write_text(render_json(doc))
    return _emit(args, f"construct {args.case}", body, reports)


def _jsonable(s: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in s.items()}


# ----------------------------------------------------------------------------
# argument parsing


def _common(default: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    sup = None if default else argparse.SUPPRESS
    p.add_argument("--grid", type=int, default=sup, help="grid points per coordinate (default 17)")
    p.add_argument("--tol", type=float, default=sup, help="non-vanishing tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=sup, help="seed for random sample points (default 42)")
    p.add_argument("--report", default=sup, metavar="PATH", help="write the JSON report here")
    p.add_argument("--quiet", action="store_true", default=False if default else argparse.SUPPRESS,
                   help="suppress the text summary")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contactpairs", parents=[_common(True)],
                                     description="Verify and construct contact pairs.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("verify", parents=[common], help="run the checks listed in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list or run built-in examples")
    p.add_argument("action", choices=["list", "run"])
    p.add_argument("id", nargs="?")
    p.add_argument("--no-flow", action="store_true", help="skip the Reeb flow integration")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("construct", parents=[common], help="build invariant torus-bundle data")
    p.add_argument("--case", choices=["full", "empty", "circles"], required=True)
    p.add_argument("--circles", help="levels of th2 as multiples of pi, e.g. '0,pi'")
    p.add_argument("--signs", help="sign of h after each level, e.g. '+,-'")
    p.add_argument("--omega1", help="curvature 2-form: JSON, JSON file or area coefficient")
    p.add_argument("--omega2", help="curvature 2-form: JSON, JSON file or area coefficient")
    p.add_argument("--k1", default="1")
    p.add_argument("--k2", default="0")
    p.add_argument("--g", help="constants 'g1,g2' when both classes vanish (default 0,1)")
    p.add_argument("--out", help="write bundle data, r and report here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("pullback-check", parents=[common], help="test phi^* form == form exactly")
    p.add_argument("manifest")
    p.add_argument("--map", required=True)
    p.add_argument("--form", required=True)
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("legendrian", parents=[common], help="check a curve against alpha or eta")
    p.add_argument("manifest")
    p.add_argument("--curve", required=True)
    p.add_argument("--wrt", choices=["alpha", "eta"], default="alpha")
    p.add_argument("--pair")
    p.add_argument("--samples", type=int, default=33)
    p.set_defaults(func=cmd_legendrian)

    p = sub.add_parser("reeb", parents=[common], help="Reeb fields and their identities")
    p.add_argument("manifest")
    p.add_argument("--pair")
    p.set_defaults(func=cmd_reeb)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_PASS
    try:
        return args.func(args)
    except (ManifestError, InputError, ParseError, ExpressionClassError, JacobiError, NoFrameError,
            cat.UnknownExampleError, bdl.NoPrimitiveError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except bdl.ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL if isinstance(exc, bdl.RCapError) else EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
