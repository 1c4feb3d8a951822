"""Command-line entry point. Output is JSON or CSV on stdout, nothing else.

Exit status: 0 on success, 1 on usage errors, 2 on domain errors (a
nonexistent tetrahedron, a flat shape where angles are needed, and so on)
and when an acceptance check fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import acceptance as acc
from . import contour as ct
from . import geometry as geo
from . import qdeform as qd
from . import reduction as rd
from . import sixj
from .spinor import SpinorError, pairs_to_complex

DOMAIN_ERRORS = (geo.GeometryError, rd.ReductionError, SpinorError, qd.DeformError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------ arg parsing

def _floats(text: str, count: int | None = None) -> list[float]:
    text = text.strip()
    try:
        vals = json.loads(text) if text.startswith("[") else [float(x) for x in text.split(",")]
        vals = [float(v) for v in vals]
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} numbers, got {len(vals)}")
    return vals


def edges_arg(text: str) -> list[float]:
    vals = _floats(text, 6)
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("edge lengths must be nonnegative")
    return vals


def vec3_arg(text: str) -> list[float]:
    return _floats(text, 3)


def sixj_arg(text: str) -> list[Fraction]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 6:
        raise argparse.ArgumentTypeError(f"expected six spins, got {len(parts)}")
    try:
        return [sixj.parse_half_integer(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def range_arg(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError("empty range")
    return range(lo, hi + 1)


def numbers_arg(text: str) -> list[int]:
    try:
        nums = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    bad = [n for n in nums if n not in acc.CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(f"no acceptance criterion {bad}")
    return nums


def orientation_arg(text: str) -> int:
    table = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    if text not in table:
        raise argparse.ArgumentTypeError("orientation is + or -")
    return table[text]


# ----------------------------------------------------------------- output

def _g(x) -> str:
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def emit_json(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def emit_csv(header, rows, out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g(x) for x in row])
    out.write(buf.getvalue())


def _format(args, default: str) -> str:
    return args.format or default


# ------------------------------------------------------------ subcommands

def cmd_tetra(args, out):
    J = geo.as_edges(args.edges)
    cls = geo.classify(J)
    emb = geo.embed(J, args.orientation)
    psi = geo.dihedral_angles(emb)
    rec = {
        "edges": J.tolist(),
        "class": cls.name,
        "orientation": args.orientation,
        "volume": emb.volume,
        "vertices": emb.vertices.tolist(),
        "normals": emb.normals.tolist(),
        "psi": psi.tolist(),
        "S": float(J @ psi),
    }
    if _format(args, "json") == "csv":
        emit_csv(["volume", "S", *(f"psi_{r}" for r in range(1, 7))],
                 [[rec["volume"], rec["S"], *psi]], out)
    else:
        emit_json(rec, out)


def cmd_schlafli(args, out):
    if args.edges is not None:
        samples = [np.asarray(args.edges, dtype=float)]
    else:
        samples = geo.random_nondegenerate(np.random.default_rng(args.seed), args.samples)
    reports = []
    for J in samples:
        if geo.classify(J) is not geo.ExistenceClass.NONDEGENERATE:
            raise geo.GeometryError(f"residuals need a nondegenerate tetrahedron, got {geo.classify(J).name}")
        h = args.h * float(np.mean(J)) if args.relative_h else args.h
        reports.append(geo.residual_report(J, h))
    keys = ["schlafli_residual", "euler_residual", "symmetry_residual", "genfun_residual"]
    if _format(args, "json") == "csv":
        emit_csv([*(f"J_{r}" for r in range(1, 7)), "h", *keys],
                 [[*r["edges"], r["h"], *(r[k] for k in keys)] for r in reports], out)
    else:
        emit_json(reports[0] if args.edges is not None else
                  {"seed": args.seed, "samples": reports,
                   "max": {k: max(r[k] for r in reports) for k in keys}}, out)


def cmd_contour(args, out):
    r = ct.run_contour(args.edges, args.orientation, args.n)
    if _format(args, "json") == "csv":
        emit_csv(["leg", "re", "im"], [[k, v.real, v.imag] for k, v in r.actions.items()], out)
    else:
        emit_json(r.to_dict(), out)


def _sweep_spec(args) -> dict:
    if args.sweep_spec:
        try:
            with open(args.sweep_spec) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read sweep spec: {exc}") from exc
    else:
        spec = {}
    for key in ("base", "direction", "lambda0", "lambda1", "n"):
        v = getattr(args, key)
        if v is not None:
            spec[key] = v
    missing = {"base", "direction", "lambda0", "lambda1"} - spec.keys()
    if missing:
        raise UsageError(f"sweep spec lacks {sorted(missing)}")
    spec.setdefault("n", 200)
    try:
        spec["base"] = [float(x) for x in spec["base"]]
        spec["direction"] = [float(x) for x in spec["direction"]]
        spec["lambda0"], spec["lambda1"] = float(spec["lambda0"]), float(spec["lambda1"])
        spec["n"] = int(spec["n"])
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed sweep spec: {exc}") from exc
    if len(spec["base"]) != 6 or len(spec["direction"]) != 6:
        raise UsageError("base and direction need six entries")
    if spec["n"] < 2:
        raise UsageError("n must be at least 2")
    return spec


def cmd_stokes(args, out):
    spec = _sweep_spec(args)
    fam = ct.linear_family(spec["base"], spec["direction"])
    rep = ct.stokes_sweep(fam, spec["lambda0"], spec["lambda1"], spec["n"], args.n_alpha)
    header = ["lambda", "S", *(f"psi_{r}" for r in range(1, 7)), "residual"]
    if _format(args, "csv") == "csv":
        emit_csv(header, rep.rows(), out)
    else:
        emit_json({"spec": spec, "summary": rep.summary(),
                   "rows": [dict(zip(header, row)) for row in rep.rows()]}, out)


def _load_config(path: str) -> ct.SpinorConfig:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        data = json.loads(text)
        z, zp = pairs_to_complex(data["z"]), pairs_to_complex(data["zp"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read spinor configuration: {exc}") from exc
    if z.shape != (6, 2) or zp.shape != (6, 2):
        raise UsageError("a configuration has six z and six z' spinors")
    return ct.SpinorConfig(z, zp)


def cmd_reduce(args, out):
    if args.config:
        config = _load_config(args.config)
    elif args.edges is not None:
        emb = geo.embed(args.edges, args.orientation)
        config = ct.build_config(emb)
        normals = geo.outward_normals(emb.vertices)
        if args.point in ("Q", "Pprime"):
            config = ct.leg1(config, normals)
        if args.point == "Pprime":
            config = ct.leg2(config, normals)
    else:
        raise UsageError("reduce needs --config FILE or --edges")
    records = []
    for r, p in enumerate(rd.project_config(config), start=1):
        J = float(np.linalg.norm(p.J))
        branch = rd.lambda_membership(p, J) if J > 0 else rd.Branch.SPHERE_PLUS
        cyl = None if branch is rd.Branch.NOT_MEMBER else rd.project_cylinder(p).to_dict()
        records.append({"edge": r, **p.to_dict(), "branch": branch.value, "cylinder": cyl})
    if _format(args, "json") == "csv":
        emit_csv(["edge", "branch", "J", "tau"],
                 [[x["edge"], x["branch"],
                   "" if x["cylinder"] is None else x["cylinder"]["J"],
                   "" if x["cylinder"] is None else x["cylinder"]["tau"]] for x in records], out)
    else:
        emit_json({"points": records}, out)


def cmd_character(args, out):
    phi = np.linspace(args.phi_min, args.phi_max, args.n_phi)
    rows = []
    for two_j in range(int(round(2 * args.j_max)) + 1):
        chi = rd.character(two_j / 2, phi)
        rows.extend([two_j / 2, f, c] for f, c in zip(phi, chi))
    if _format(args, "csv") == "csv":
        emit_csv(["j", "phi", "chi"], rows, out)
    else:
        emit_json([{"j": a, "phi": b, "chi": c} for a, b, c in rows], out)


def cmd_sixj(args, out):
    fmt = _format(args, "csv" if args.sweep else "json")
    if args.sweep:
        rows, notes = sixj.compare_sweep(args.j, args.sweep)
        for n in notes:
            print(n, file=sys.stderr)
        header = ["k", "exact", "asym", "abs_err", "rel_err_vs_amplitude"]
        data = [[r.k, float(r.exact), r.asym, r.abs_err, r.rel_err] for r in rows]
        if fmt == "csv":
            emit_csv(header, data, out)
        else:
            emit_json({"rows": [dict(zip(header, d)) for d in data], "notes": notes}, out)
        return
    want_exact = args.exact or not args.asym
    rec = {"j": [str(x) for x in args.j]}
    if want_exact:
        v = sixj.exact_6j(args.j)
        rec["exact"] = str(v)
        rec["value"] = float(v)
    if args.asym:
        rec["asym"] = sixj.pr_asymptotic(args.j)
        rec["amplitude"] = sixj.pr_amplitude(args.j)
    if fmt == "csv":
        keys = [k for k in ("exact", "value", "asym", "amplitude") if k in rec]
        emit_csv(keys, [[rec[k] for k in keys]], out)
    else:
        emit_json(rec, out)


def _deformed(text, rng) -> qd.DeformedJ:
    return qd.random_J(rng) if text is None else qd.from_cartesian(*text)


def cmd_qgroup(args, out):
    rng = np.random.default_rng(args.seed)
    J1 = _deformed(args.J1, rng)
    J2 = _deformed(args.J2, rng)
    if args.demo == "coproduct":
        c = qd.comult2(J1, J2)
        m = qd.J_from_b(qd.b_from_J(J1) @ qd.b_from_J(J2))
        swapped = qd.comult2(J2, J1)
        rec = {"J1": J1.to_dict(), "J2": J2.to_dict(), "coproduct": c.to_dict(),
               "matrix_product": m.to_dict(),
               "gap": max(abs(c.Jz - m.Jz), abs(c.Jminus - m.Jminus)),
               "swapped": swapped.to_dict()}
    elif args.demo == "diangle":
        J2 = qd.diangle_closure(J1)
        rec = {"J1": J1.to_dict(), "J2": J2.to_dict(), "total": qd.comult2(J1, J2).to_dict()}
    else:
        rec = {"J1": J1.to_dict(), "J2": J2.to_dict(), **qd.triangle_demo(J1, J2)}
    emit_json(rec, out)


def cmd_acceptance(args, out):
    checks = acc.run(args.only, args.seed)
    if _format(args, "json") == "csv":
        emit_csv(["number", "title", "passed"], [[c.number, c.title, str(c.passed)] for c in checks], out)
    else:
        recs = [c.to_dict() for c in checks]
        if not args.timings:
            for r in recs:
                r.pop("seconds")
                for k in ("sample_seconds",):
                    r["detail"].pop(k, None)
        emit_json({"seed": args.seed, "checks": recs, "all_passed": all(c.passed for c in checks)}, out)
    return 0 if all(c.passed for c in checks) else 2


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=acc.DEFAULT_SEED)

    p = _Parser(prog="schlafli", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("tetra", parents=[common], help="embed and classify a tetrahedron")
    s.add_argument("--edges", type=edges_arg, required=True)
    s.add_argument("--orientation", type=orientation_arg, default=1)
    s.set_defaults(func=cmd_tetra)

    s = sub.add_parser("schlafli", parents=[common], help="finite-difference residuals")
    s.add_argument("--edges", type=edges_arg)
    s.add_argument("--h", type=float, default=1e-5)
    s.add_argument("--absolute-h", dest="relative_h", action="store_false",
                   help="use --h as is instead of scaling it by the mean edge")
    s.add_argument("--samples", type=int, default=100)
    s.set_defaults(func=cmd_schlafli)

    s = sub.add_parser("contour", parents=[common], help="run the three-leg contour")
    s.add_argument("--edges", type=edges_arg, required=True)
    s.add_argument("--orientation", type=orientation_arg, default=1)
    s.add_argument("--n", type=int, default=ct.DEFAULT_SAMPLES)
    s.set_defaults(func=cmd_contour)

    s = sub.add_parser("stokes", parents=[common], help="Stokes sweep along a linear family")
    s.add_argument("--sweep-spec")
    s.add_argument("--base", type=edges_arg)
    s.add_argument("--direction", type=lambda t: _floats(t, 6))
    s.add_argument("--lambda0", type=float)
    s.add_argument("--lambda1", type=float)
    s.add_argument("--n", type=int)
    s.add_argument("--n-alpha", type=int, default=200)
    s.set_defaults(func=cmd_stokes)

    s = sub.add_parser("reduce", parents=[common], help="project a spinor configuration")
    s.add_argument("--config", help="SpinorConfig JSON file, or - for stdin")
    s.add_argument("--edges", type=edges_arg)
    s.add_argument("--orientation", type=orientation_arg, default=1)
    s.add_argument("--point", choices=("P", "Q", "Pprime"), default="P")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("character", parents=[common], help="SU(2) characters on a grid")
    s.add_argument("--j-max", type=float, default=5.0)
    s.add_argument("--n-phi", type=int, default=50)
    s.add_argument("--phi-min", type=float, default=0.05)
    s.add_argument("--phi-max", type=float, default=2 * np.pi - 0.05)
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("sixj", parents=[common], help="exact and asymptotic 6j symbols")
    s.add_argument("--j", type=sixj_arg, required=True)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--asym", action="store_true")
    s.add_argument("--sweep", type=range_arg, help="scale range LO:HI")
    s.set_defaults(func=cmd_sixj)

    s = sub.add_parser("qgroup", parents=[common], help="deformed coproduct demos")
    s.add_argument("demo", choices=("coproduct", "diangle", "triangle"))
    s.add_argument("--J1", type=vec3_arg, help="Jx,Jy,Jz (random if omitted)")
    s.add_argument("--J2", type=vec3_arg)
    s.set_defaults(func=cmd_qgroup)

    s = sub.add_parser("acceptance", parents=[common], help="run the acceptance checks")
    s.add_argument("--only", type=numbers_arg)
    s.add_argument("--timings", action="store_true")
    s.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args, out)
    except UsageError as exc:
        print(f"schlafli {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"schlafli {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return code or 0


def main_exit() -> None:
    sys.exit(main())
