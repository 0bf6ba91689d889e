"""Command-line front end: ``crgauss <command> [options]``.

Every successful command prints one JSON report on stdout (``--format table``
renders the same report as aligned text). Exit codes: 0 success, 2 invalid
input, 3 internal-consistency failure, 64 unknown command.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .embed import (
    MAX_RESAMPLES,
    P_TOL,
    S_FLOOR,
    PoleError,
    QuadraticForm,
    SamplingError,
    defining_residual,
    random_quadratic_form,
    sample_points,
    sphere_residual,
)
from .fischer import fischer_decompose, is_harmonic, reconstruct
from .gauss import (
    G_TOL,
    R_TOL,
    RESIDUAL_TOL,
    GaussConsistencyError,
    GaussSolution,
    GridSpec,
    brute_clusters,
    solve_gauss,
    verify_gauss,
)
from .normalize import C_TOL, NormalizationError, normalize
from .tensor import (
    V_TOL,
    Z_TOL,
    CurvatureTensor,
    NormalForm,
    _complex,
    build_LS_general,
    build_LS_normalized,
    classify,
    harmonic_matrix,
    laplacian,
    numerical_rank,
    sectional_matrix,
    tensor_from_normal_form,
    validate,
)

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_USAGE = 0, 2, 3, 64
SEED_ENV = "CR_GAUSS_SEED"
COMMANDS = ("validate", "normalize", "classify", "solve", "verify", "fischer", "ellipsoid", "oracle")


class InputError(ValueError):
    pass


class ConsistencyError(RuntimeError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def _read_json(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_normal_form(args) -> NormalForm:
    """Normal form from exactly one source: ``--input`` or the inline ``--a/--b/--c`` flags."""
    inline = [f for f in ("a", "b", "c") if getattr(args, f, None) is not None]
    path = getattr(args, "input", None)
    if path is not None and inline:
        raise InputError(f"conflicting sources: --input and --{', --'.join(inline)}")
    if path is not None:
        obj = _read_json(path)
        if not isinstance(obj, dict):
            raise InputError(f"{path}: expected a JSON object")
        try:
            return NormalForm.from_json(obj)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: bad normal form: {exc}") from exc
    if args.a is None:
        raise InputError("no normal form given: pass --input or --a [--b re,im] [--c re,im]")
    try:
        return NormalForm(args.a, args.b or 0j, args.c or 0j)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"{SEED_ENV}={env!r} is not an integer") from exc


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _mjson(m) -> list:
    return [[_cjson(x) for x in row] for row in np.asarray(m)]


def _report(args, **body) -> dict:
    return {"command": args.command, "version": __version__, **body}


def _normalized(args, nf):
    try:
        return normalize(nf, args.c_tol)
    except NormalizationError as exc:
        raise ConsistencyError(str(exc)) from exc


def cmd_validate(args):
    if args.input is not None:
        obj = _read_json(args.input)
        if not isinstance(obj, dict):
            raise InputError(f"{args.input}: expected a JSON object")
        try:
            t = CurvatureTensor.from_json(obj) if "entries" in obj else tensor_from_normal_form(NormalForm.from_json(obj))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{args.input}: {exc}") from exc
    else:
        t = tensor_from_normal_form(load_normal_form(args))
    bad = validate(t, args.v_tol)
    report = _report(
        args,
        input=t.to_json(),
        valid=not bad,
        violations=[{"kind": v.kind, "index": [i + 1 for i in v.index], "residual": v.residual} for v in bad],
        tolerances={"v_tol": args.v_tol},
    )
    if not bad:
        report["sectional_matrix"] = _mjson(sectional_matrix(t))
    return report, (EXIT_OK if not bad else EXIT_INPUT)


def cmd_normalize(args):
    nf = load_normal_form(args)
    out, u = _normalized(args, nf)
    return _report(
        args,
        input=nf.to_json(),
        normalized=out.to_json(),
        su2=u.to_json(),
        c_residual=abs(out.c),
        tolerances={"c_tol": args.c_tol},
    ), EXIT_OK


def _classification_body(args, nf):
    out, u = _normalized(args, nf)
    cls = classify(out.a, out.b, args.z_tol)
    ls_general = build_LS_general(tensor_from_normal_form(nf))
    ls_closed = build_LS_normalized(out.a, out.b)
    body = {
        "input": nf.to_json(),
        "normalized": out.to_json(),
        "su2": u.to_json(),
        **cls.to_json(),
        "LS": {
            "normalized_matrix": _mjson(ls_closed),
            "normalized_trace": float(np.trace(ls_closed).real),
            "contraction_rank": numerical_rank(ls_general, args.z_tol),
            "contraction_trace": _cjson(np.trace(ls_general)),
        },
    }
    return body, out, cls


def cmd_classify(args):
    nf = load_normal_form(args)
    body, _, _ = _classification_body(args, nf)
    return _report(args, **body, tolerances={"z_tol": args.z_tol, "c_tol": args.c_tol}), EXIT_OK


def cmd_solve(args):
    nf = load_normal_form(args)
    body, out, _ = _classification_body(args, nf)
    try:
        result = solve_gauss(out.a, out.b, args.z_tol, args.r_tol)
    except GaussConsistencyError as exc:
        raise ConsistencyError(str(exc)) from exc
    sols = []
    worst = 0.0
    for s in result:
        res = verify_gauss(out.a, out.b, s.A, s.sff)
        worst = max(worst, res)
        sols.append({**s.to_json(), "residual": res})
    failure = worst > args.residual_tol
    report = _report(
        args,
        **body,
        solutions=sols,
        flat=result.flat,
        candidates=[c.to_json() for c in result.candidates],
        max_residual=worst,
        failure=failure,
        tolerances={
            "z_tol": args.z_tol,
            "c_tol": args.c_tol,
            "r_tol": args.r_tol,
            "residual_tol": args.residual_tol,
        },
    )
    if failure:
        raise ConsistencyError(f"Gauss residual {worst:.3e} exceeds {args.residual_tol:.1e}", report)
    return report, EXIT_OK


def _load_solutions(path):
    obj = _read_json(path)
    if isinstance(obj, dict) and "solutions" in obj:
        obj = obj["solutions"]
    if isinstance(obj, dict):
        obj = [obj]
    if not isinstance(obj, list):
        raise InputError(f"{path}: expected a solution object or list")
    try:
        return [GaussSolution.from_json(o) for o in obj]
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: bad solution record: {exc}") from exc


def cmd_verify(args):
    nf = load_normal_form(args)
    if abs(nf.c) > args.c_tol * max(1.0, nf.scale()):
        raise InputError("verify expects a normalized form (c = 0); run `normalize` first")
    sols = _load_solutions(args.solution)
    rows = []
    for s in sols:
        res = verify_gauss(nf.a, nf.b, s.A, s.sff)
        rows.append({"A": s.A.to_json(), "omega": s.sff.to_json(), "residual": res, "is_solution": res <= args.residual_tol})
    return _report(
        args,
        input=nf.to_json(),
        checks=rows,
        all_solutions=all(r["is_solution"] for r in rows),
        tolerances={"residual_tol": args.residual_tol},
    ), EXIT_OK


def cmd_fischer(args):
    if (args.input is None) == (args.matrix is None):
        raise InputError("give exactly one of --input and --matrix")
    obj = _read_json(args.input) if args.input is not None else None
    if obj is None:
        try:
            obj = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise InputError(f"--matrix: malformed JSON at column {exc.colno}: {exc.msg}") from exc
    rows = obj.get("m") if isinstance(obj, dict) else obj
    try:
        m = np.array([[_complex(x) for x in row] for row in rows], dtype=complex)
        nf, A = fischer_decompose(m)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad matrix: {exc}") from exc
    rec = float(np.max(np.abs(reconstruct(nf, A) - m)))
    harm = harmonic_matrix(nf)
    return _report(
        args,
        input=_mjson(m),
        harmonic=nf.to_json(),
        A=A.to_json(),
        reconstruction_residual=rec,
        harmonic_laplacian=float(np.max(np.abs(laplacian(harm)))),
        is_harmonic=is_harmonic(m),
    ), EXIT_OK


def cmd_ellipsoid(args):
    seed = _seed(args)
    rng = np.random.default_rng(seed)
    if args.input is not None:
        obj = _read_json(args.input)
        try:
            Q = QuadraticForm.from_json(obj)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{args.input}: bad quadratic form: {exc}") from exc
    else:
        Q = random_quadratic_form(args.n, rng, args.max_norm)
    if args.samples < 1:
        raise InputError("--samples must be positive")
    try:
        z = sample_points(Q, args.samples, rng, args.s_floor, args.max_resamples)
        sph = sphere_residual(Q, z, args.p_tol)
    except (PoleError, SamplingError) as exc:
        raise ConsistencyError(str(exc)) from exc
    dfn = defining_residual(Q, z)
    worst = float(np.max(np.abs(sph)))
    report = _report(
        args,
        input=Q.to_json(),
        seed=seed,
        samples=args.samples,
        B_norm=Q.norm(),
        max_defining_residual=float(np.max(np.abs(dfn))),
        max_sphere_residual=worst,
        failure=worst > args.residual_tol,
        tolerances={
            "residual_tol": args.residual_tol,
            "p_tol": args.p_tol,
            "s_floor": args.s_floor,
            "max_resamples": args.max_resamples,
        },
    )
    if report["failure"]:
        raise ConsistencyError(f"sphere residual {worst:.3e} exceeds {args.residual_tol:.1e}", report)
    return report, EXIT_OK


def match_clusters(clusters, solutions, radius):
    """Pair each cluster with the solutions lying within ``radius`` of one of its members."""
    pairs = []
    for i, c in enumerate(clusters):
        pts = np.array(c.members)
        for j, s in enumerate(solutions):
            target = np.array([s.A.tau, s.A.rho, s.A.sigma.real, s.A.sigma.imag])
            d = float(np.min(np.max(np.abs(pts - target), axis=1)))
            if d <= radius:
                pairs.append((i, j, d))
    return pairs


def cmd_oracle(args):
    nf = load_normal_form(args)
    if abs(nf.c) > args.c_tol * max(1.0, nf.scale()):
        raise InputError("oracle expects a normalized form (c = 0)")
    try:
        grid = GridSpec(args.lo, args.hi, args.step, args.g_tol)
        grid.axis()
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    clusters = [c for c in brute_clusters(nf.a, nf.b, grid) if -c.min_eigenvalue > grid.g_tol]
    try:
        sols = list(solve_gauss(nf.a, nf.b, args.z_tol, args.r_tol))
    except GaussConsistencyError as exc:
        raise ConsistencyError(str(exc)) from exc
    pairs = match_clusters(clusters, sols, args.step)
    one_to_one = (
        len(clusters) == len(sols)
        and len(pairs) == len(sols)
        and len({i for i, _, _ in pairs}) == len(clusters)
        and len({j for _, j, _ in pairs}) == len(sols)
    )
    report = _report(
        args,
        input=nf.to_json(),
        grid={"lo": args.lo, "hi": args.hi, "step": args.step, "g_tol": args.g_tol},
        clusters=[c.to_json() for c in clusters],
        solutions=[s.to_json() for s in sols],
        matches=[{"cluster": i, "solution": j, "distance": d} for i, j, d in pairs],
        agree=one_to_one,
    )
    if not one_to_one:
        raise ConsistencyError("oracle clusters do not match solve_gauss", report)
    return report, EXIT_OK


def _add_nf_flags(p):
    p.add_argument("--input", type=Path, default=None, help="JSON file with a normal form")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=_parse_complex, default=None, help="re,im")
    p.add_argument("--c", type=_parse_complex, default=None, help="re,im")


def _add_common(p):
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--z-tol", type=float, default=Z_TOL)
    p.add_argument("--c-tol", type=float, default=C_TOL)
    p.add_argument("--r-tol", type=float, default=R_TOL)
    p.add_argument("--v-tol", type=float, default=V_TOL)
    p.add_argument("--residual-tol", type=float, default=RESIDUAL_TOL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crgauss", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    helps = {
        "validate": "check the symmetry and trace laws of a curvature tensor",
        "normalize": "rotate a normal form to c = 0",
        "classify": "rank / trace class of L_S and the expected number of solutions",
        "solve": "all second fundamental forms solving the Gauss equation",
        "verify": "residual of given (A, omega) pairs in the Gauss equation",
        "fischer": "harmonic + |zeta|^2 splitting of a Hermitian 3x3 matrix",
        "ellipsoid": "sample a Webster hypersurface and check its sphere embedding",
        "oracle": "grid-search cross-check of the Gauss solutions",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        _add_common(p)
        if name == "fischer":
            p.add_argument("--input", type=Path, default=None, help='JSON file {"m": [[[re, im], ...], ...]}')
            p.add_argument("--matrix", default=None, help="inline JSON 3x3 matrix of [re, im] pairs")
        elif name == "ellipsoid":
            p.add_argument("--input", type=Path, default=None, help="QuadraticForm JSON")
            p.add_argument("--samples", type=int, default=10_000)
            p.add_argument("--seed", type=int, default=None, help=f"falls back to ${SEED_ENV}, then 0")
            p.add_argument("--n", type=int, default=3, help="dimension of a random form when --input is absent")
            p.add_argument("--max-norm", type=float, default=0.3)
            p.add_argument("--p-tol", type=float, default=P_TOL)
            p.add_argument("--s-floor", type=float, default=S_FLOOR)
            p.add_argument("--max-resamples", type=int, default=MAX_RESAMPLES)
        else:
            _add_nf_flags(p)
        if name == "verify":
            p.add_argument("--solution", type=Path, required=True, help="GaussSolution JSON, list, or solve report")
        if name == "oracle":
            p.add_argument("--lo", type=float, default=-4.0)
            p.add_argument("--hi", type=float, default=7.0)
            p.add_argument("--step", type=float, default=0.25)
            p.add_argument("--g-tol", type=float, default=G_TOL)
    return parser


HANDLERS = {
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "classify": cmd_classify,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "fischer": cmd_fischer,
    "ellipsoid": cmd_ellipsoid,
    "oracle": cmd_oracle,
}


def _finite(obj):
    """Strict-JSON floats: non-finite values become strings."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return obj + 0.0  # drop negative zero
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_finite(report), indent=2, sort_keys=True)


def render_table(report: dict) -> str:
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and v and all(isinstance(x, (dict, list)) for x in v) and not _is_pair_list(v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            rows.append((prefix, json.dumps(_finite(v))))

    walk("", report)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _is_pair_list(v):
    return all(isinstance(x, list) and len(x) == 2 and all(isinstance(y, (int, float)) for y in x) for x in v)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if not argv or (not argv[0].startswith("-") and argv[0] not in COMMANDS):
        parser.print_usage(stderr)
        if argv:
            print(f"crgauss: unknown command {argv[0]!r}", file=stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command is None:
        parser.print_usage(stderr)
        return EXIT_USAGE
    try:
        report, code = HANDLERS[args.command](args)
    except InputError as exc:
        print(f"crgauss {args.command}: invalid input: {exc}", file=stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"crgauss {args.command}: consistency failure: {exc}", file=stderr)
        if exc.report is not None:
            print(dumps(exc.report), file=stderr)
        return EXIT_CONSISTENCY
    text = render_table(report) if args.format == "table" else dumps(report)
    print(text, file=stdout)
    if code == EXIT_INPUT:
        print(f"crgauss {args.command}: input rejected, see report", file=stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
