"""Command-line interface: one subcommand per public operation.

Output is a JSON envelope (or CSV with ``--format csv``) on stdout. Exit
codes: 0 success, 1 internal error, 2 violated precondition, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from fractions import Fraction

from . import bundles, cobordism, hopf, surfaces, torus
from .errors import PreconditionError

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument types ---------------------------------------------------------


def _real(text: str) -> float:
    """A float, or an exact fraction "p/q"."""
    try:
        x = float(Fraction(text.strip())) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def _half_plane(text: str) -> torus.HalfPlanePoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im, got {text!r}")
    re, im = (_real(p) for p in parts)
    if im <= 0:
        raise argparse.ArgumentTypeError(f"imaginary part must be positive, got {im}")
    return torus.HalfPlanePoint(re, im)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _non_negative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {n}")
    return n


def _at_least_two(text: str) -> int:
    n = _positive(text)
    if n < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return n


# -- serialization ----------------------------------------------------------


def jsonable(obj):
    """Plain JSON data: complex and moduli as [re, im], inf/nan as null."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return int(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, torus.HalfPlanePoint):
        return [obj.re, obj.im]
    if isinstance(obj, torus.LatticePoint):
        return jsonable(obj.z)
    if isinstance(obj, torus.ModularMatrix):
        return [list(row) for row in obj.entries()]
    if isinstance(obj, cobordism.GraftReport):
        d = {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.name != "surface"}
        return d
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


REPORT_COLUMNS = [
    "index", "relation", "move_k", "move_l", "move_m", "move_n", "r", "neg",
    "graft_re", "graft_im", "reduced_re", "reduced_im", "j_re", "j_im",
    "target_u", "target_v", "torsion", "dioph_exponent", "dioph_verdict", "isog_degree",
]


def _report_row(i, rep: cobordism.GraftReport):
    g = rep.move.gamma
    j = rep.graft_j
    return {
        "index": i,
        "relation": rep.relation,
        "move_k": g.k,
        "move_l": g.l,
        "move_m": g.m,
        "move_n": g.n,
        "r": rep.move.r,
        "neg": int(rep.move.use_negation),
        "graft_re": rep.graft_exponent.re,
        "graft_im": rep.graft_exponent.im,
        "reduced_re": rep.graft_reduced.re,
        "reduced_im": rep.graft_reduced.im,
        "j_re": j.real if math.isfinite(j.real) else "",
        "j_im": j.imag if math.isfinite(j.real) else "",
        "target_u": rep.target_bundle.u,
        "target_v": rep.target_bundle.v,
        "torsion": "" if rep.torsion is None else int(rep.torsion.is_torsion),
        "dioph_exponent": "" if rep.diophantine is None else jsonable(rep.diophantine.exponent_estimate),
        "dioph_verdict": "" if rep.diophantine is None else rep.diophantine.verdict,
        "isog_degree": "" if rep.isogeny_to_source is None else rep.isogeny_to_source.degree,
    }


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(obj, list) and obj and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    elif isinstance(obj, list):
        out.append((prefix, ";".join("" if x is None else repr(x) for x in obj)))
    else:
        out.append((prefix, "" if obj is None else obj))


def render_csv(envelope: dict, raw_reports=None) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={envelope['schema_version']}\n")
    buf.write(f"# command={envelope['command']}\n")
    for w in envelope["warnings"]:
        buf.write(f"# warning: {w}\n")
    writer = csv.writer(buf, lineterminator="\n")
    if raw_reports is not None:
        writer.writerow(REPORT_COLUMNS)
        for i, rep in enumerate(raw_reports):
            row = _report_row(i, rep)
            writer.writerow([row[c] for c in REPORT_COLUMNS])
    else:
        rows = []
        _flatten("", envelope["result"], rows)
        writer.writerow(["key", "value"])
        writer.writerows(rows)
    return buf.getvalue()


# -- commands ---------------------------------------------------------------


def _bundle(args) -> bundles.BundleTauForm:
    return bundles.BundleTauForm(args.tau, args.u, args.v)


def _torsion_warning(bound):
    return f"torsion verdicts are bound-qualified: non-torsion means no denominator <= {bound}"


def _dioph_warning(n_max):
    return f"Diophantine verdicts are heuristic: finite sweep over 2 <= n <= {n_max}"


def _isogeny_warning(degree):
    return f"isogeny search bound-qualified: null means no isogeny of degree <= {degree}"


def _relation_warning(bound):
    return f"relation search bound-qualified: two-curves means no relation with 1 <= n, m <= {bound}"


def cmd_reduce(args):
    red, g = torus.reduce_to_fundamental_domain(args.tau)
    return {"tau": args.tau, "tau_reduced": red, "matrix": g}, [], None


def cmd_jinv(args):
    red, _ = torus.reduce_to_fundamental_domain(args.tau)
    j = torus.j_invariant(args.tau)
    warnings = []
    if not math.isfinite(j.real):
        warnings.append("j overflows double precision for reduced Im(tau) > 112; reported as null")
    return {"tau_reduced": red, "j": j}, warnings, None


def cmd_class(args):
    p = bundles.pic0_point(_bundle(args))
    a, b = p.coordinates()
    return {"point": p.z, "lattice_coordinates": [a, b]}, [], None


def cmd_torsion(args):
    tv = bundles.is_torsion(_bundle(args), args.bound)
    return tv, [_torsion_warning(args.bound)], None


def cmd_diophantine(args):
    rep = bundles.diophantine_report(_bundle(args), args.nmax)
    return rep, [_dioph_warning(args.nmax)], None


def cmd_to_hopf(args):
    return bundles.tau_to_hopf(_bundle(args), args.u_rep), [], None


def cmd_from_hopf(args):
    return bundles.hopf_to_tau(bundles.BundleHopfForm(args.base, args.fiber)), [], None


def cmd_classify_hopf(args):
    cls = hopf.classify_hopf(hopf.HopfSurface(args.lam, args.mu), args.bound)
    return cls, [_relation_warning(args.bound)], None


def cmd_joint_hopf(args):
    h, cls = hopf.joint_hopf(args.tauE, args.tauF, args.bound)
    return {"surface": h, "classification": cls}, [_relation_warning(args.bound)], None


def _report_warnings(args):
    return [
        _torsion_warning(args.bound),
        _dioph_warning(args.nmax),
        _isogeny_warning(args.max_degree),
        "distinctness of reports is up to bundle equivalence; graft_j is reported for comparison",
    ]


def _report_budgets(args):
    return {"torsion_bound": args.bound, "n_max": args.nmax, "isogeny_degree": args.max_degree}


def cmd_cobordants(args):
    reps = cobordism.enumerate_cobordant(_bundle(args), args.count, **_report_budgets(args))
    return reps, _report_warnings(args), reps


def cmd_duals(args):
    reps = cobordism.enumerate_hopf_duals(_bundle(args), args.count, **_report_budgets(args))
    return reps, _report_warnings(args), reps


def cmd_compactifications(args):
    recs = cobordism.minimal_compactifications(
        _bundle(args), args.count, torsion_bound=args.bound, secondary_max_n=args.secondary_max_n
    )
    return recs, [_torsion_warning(args.bound)], None


def cmd_nine_points(args):
    cfg = surfaces.NinePointConfig.load(args.config)
    b = surfaces.normal_bundle_class(cfg)
    result = {
        "normal_bundle": b,
        "pic0_point": bundles.pic0_point(b),
        "torsion": bundles.is_torsion(b, args.bound),
        "diophantine": bundles.diophantine_report(b, args.nmax),
    }
    return result, [_torsion_warning(args.bound), _dioph_warning(args.nmax)], None


def cmd_structures(args):
    cfg = surfaces.NinePointConfig.load(args.config)
    reps = surfaces.enumerate_algebraic_structures(cfg, args.count, **_report_budgets(args))
    warnings = _report_warnings(args) + ["the nine points of each transformed surface are not computed"]
    return reps, warnings, reps


def cmd_motivic(args):
    cls = surfaces.motivic_class_blowup_p2(args.points)
    result = {
        "coefficients": list(cls.coefficients),
        "polynomial": str(cls),
        "euler_characteristic": cls.euler_characteristic(),
    }
    return result, [], None


def cmd_k0an_witness(args):
    w = surfaces.verify_k0an_equality(
        args.tauE,
        args.tauF,
        args.budget,
        offset=args.seed,
        relation_bound=args.bound,
        torsion_bound=args.torsion_bound,
        n_max=args.nmax,
    )
    warnings = [
        _relation_warning(args.bound),
        _torsion_warning(args.torsion_bound),
        _dioph_warning(args.nmax),
    ]
    if w.found and w.outcome == "witness":
        warnings.append("[E] = [W] = [F] holds at the level of the checked hypotheses only")
    return w, warnings, None


# -- parser -----------------------------------------------------------------


def _add_bundle(p):
    p.add_argument("--tau", type=_half_plane, required=True, help="modulus re,im")
    p.add_argument("--u", type=_real, required=True)
    p.add_argument("--v", type=_real, required=True)


def _add_report_budgets(p):
    p.add_argument("--count", type=_positive, default=10)
    p.add_argument("--bound", type=_positive, default=bundles.DEFAULT_DENOMINATOR_BOUND,
                   help="torsion denominator bound")
    p.add_argument("--nmax", type=_at_least_two, default=cobordism.DEFAULT_NMAX)
    p.add_argument("--max-degree", type=_positive, default=cobordism.DEFAULT_ISOGENY_DEGREE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hopftransform", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = add("reduce", cmd_reduce, "reduce a modulus to the fundamental domain")
    p.add_argument("--tau", type=_half_plane, required=True)
    p = add("jinv", cmd_jinv, "j-invariant of a modulus")
    p.add_argument("--tau", type=_half_plane, required=True)
    p = add("class", cmd_class, "Pic^0 point of a bundle")
    _add_bundle(p)
    p = add("torsion", cmd_torsion, "bounded torsion test")
    _add_bundle(p)
    p.add_argument("--bound", type=_positive, default=bundles.DEFAULT_DENOMINATOR_BOUND)
    p = add("diophantine", cmd_diophantine, "Diophantine exponent estimate")
    _add_bundle(p)
    p.add_argument("--nmax", type=_at_least_two, default=cobordism.DEFAULT_NMAX)
    p = add("to-hopf", cmd_to_hopf, "tau form to Hopf form")
    _add_bundle(p)
    p.add_argument("--u-rep", type=_real, default=None, help="negative representative of u mod 1")
    p = add("from-hopf", cmd_from_hopf, "Hopf form to tau form")
    p.add_argument("--base", type=_half_plane, required=True)
    p.add_argument("--fiber", type=_half_plane, required=True)
    p = add("classify-hopf", cmd_classify_hopf, "search a multiplicative relation")
    p.add_argument("--lambda", dest="lam", type=_half_plane, required=True)
    p.add_argument("--mu", type=_half_plane, required=True)
    p.add_argument("--bound", type=_positive, default=hopf.DEFAULT_RELATION_BOUND)
    p = add("joint-hopf", cmd_joint_hopf, "Hopf surface joining two curves")
    p.add_argument("--tauE", type=_half_plane, required=True)
    p.add_argument("--tauF", type=_half_plane, required=True)
    p.add_argument("--bound", type=_positive, default=hopf.DEFAULT_RELATION_BOUND)
    p = add("cobordants", cmd_cobordants, "analytically cobordant bundles")
    _add_bundle(p)
    _add_report_budgets(p)
    p = add("duals", cmd_duals, "Hopf-dual bundles")
    _add_bundle(p)
    _add_report_budgets(p)
    p = add("compactifications", cmd_compactifications, "minimal compactifications")
    _add_bundle(p)
    p.add_argument("--count", type=_positive, default=10)
    p.add_argument("--bound", type=_positive, default=bundles.DEFAULT_DENOMINATOR_BOUND)
    p.add_argument("--secondary-max-n", type=_non_negative, default=cobordism.DEFAULT_SECONDARY_N)
    p = add("nine-points", cmd_nine_points, "normal bundle of a nine-point configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--bound", type=_positive, default=bundles.DEFAULT_DENOMINATOR_BOUND)
    p.add_argument("--nmax", type=_at_least_two, default=cobordism.DEFAULT_NMAX)
    p = add("structures", cmd_structures, "algebraic structures on a cubic complement")
    p.add_argument("--config", required=True)
    _add_report_budgets(p)
    p = add("motivic", cmd_motivic, "motivic classes")
    p.add_argument("which", choices=("blowup-p2",))
    p.add_argument("--points", type=_non_negative, required=True)
    p = add("k0an-witness", cmd_k0an_witness, "witness curve for [E] = [F] in K0an")
    p.add_argument("--tauE", type=_half_plane, required=True)
    p.add_argument("--tauF", type=_half_plane, required=True)
    p.add_argument("--budget", type=_non_negative, default=100)
    p.add_argument("--seed", type=_non_negative, default=0, help="offset into the witness sequence")
    p.add_argument("--bound", type=_positive, default=hopf.DEFAULT_RELATION_BOUND,
                   help="relation search bound")
    p.add_argument("--torsion-bound", type=_positive, default=bundles.DEFAULT_DENOMINATOR_BOUND)
    p.add_argument("--nmax", type=_at_least_two, default=cobordism.DEFAULT_NMAX)
    return parser


def _params(args) -> dict:
    skip = {"func", "command", "format"}
    return {k: jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    base = {"schema_version": SCHEMA_VERSION, "command": args.command, "params": _params(args)}
    try:
        result, warnings, reports = args.func(args)
    except PreconditionError as exc:
        err = dict(base, error={"kind": "precondition", "hypothesis": exc.hypothesis, "message": str(exc)})
        stdout.write(_dump(err))
        return EXIT_PRECONDITION
    except (ValueError, OSError, KeyError) as exc:
        err = dict(base, error={"kind": "precondition", "hypothesis": "valid-input", "message": str(exc)})
        stdout.write(_dump(err))
        return EXIT_PRECONDITION
    except Exception as exc:  # pragma: no cover - defensive
        stderr.write(_dump(dict(base, error={"kind": "internal", "message": repr(exc)})))
        return EXIT_INTERNAL
    envelope = dict(base, result=jsonable(result), warnings=warnings)
    if args.format == "csv":
        stdout.write(render_csv(envelope, reports))
    else:
        stdout.write(_dump(envelope))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
