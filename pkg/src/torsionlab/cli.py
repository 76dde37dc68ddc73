"""Command-line interface.

Subcommands:
    torsion        log torsion of a twisted complex (preset or JSON input)
    zeta           one spectral zeta evaluation on a model geometry
    model-torsion  residue/analytic torsion of a closed or boundary model
    verify         run the verification suites
    gluing         evaluate the torsion gluing identity on a split geometry

Exit codes: 0 success; 1 failed verification or internal error; 2 malformed
input; 3 acyclicity violation; 4 zeta pole hit.  All floating output uses 15
significant digits; --json output round-trips bit-exactly through json.loads.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import boundary as bnd
from . import models as mdl
from .complexes import build_preset, complex_from_json
from .errors import (
    NotAcyclic,
    NotAcyclicPreset,
    PoleAtOne,
    PoleHit,
    SchemaError,
    TorsionLabError,
)
from .hodge import ChainMetric, spectral_data, tr_log
from .torsion import classify_beta, determinant_oracle, generalized_log_torsion
from .verify import DEFAULT_SEED, run_suites

CLOSED_MODELS = ("circle", "torus", "sphere2")
BOUNDARY_MODELS = ("interval", "cylinder")


def fmt(x: float) -> str:
    return f"{x:.15g}"


def parse_beta(spec: str, length: int) -> tuple[float, ...]:
    """Weight grammar: '1' | 'k' | 'lin:lam,mu' | explicit comma list."""
    spec = spec.strip()
    if spec == "1":
        return (1.0,) * length
    if spec == "k":
        return tuple(float(k) for k in range(length))
    if spec.startswith("lin:"):
        parts = spec[4:].split(",")
        if len(parts) != 2:
            raise SchemaError(f"expected lin:lam,mu, got {spec!r}")
        try:
            lam, mu = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise SchemaError(f"bad linear weight spec {spec!r}") from exc
        return tuple(lam + mu * k for k in range(length))
    try:
        beta = tuple(float(x) for x in spec.split(","))
    except ValueError as exc:
        raise SchemaError(f"bad weight list {spec!r}") from exc
    if len(beta) != length:
        raise SchemaError(f"weight list has length {len(beta)}, need {length}")
    return beta


def _emit(args, payload: dict, pretty_lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif getattr(args, "csv", False):
        for key, value in sorted(_flatten(payload).items()):
            print(f"{key},{value}")
    else:
        for line in pretty_lines:
            print(line)


def _flatten(obj, prefix: str = "") -> dict:
    out: dict = {}
    if isinstance(obj, dict):
        for key, value in obj.items():
            out.update(_flatten(value, f"{prefix}{key}."))
    elif isinstance(obj, (list, tuple)):
        for idx, value in enumerate(obj):
            out.update(_flatten(value, f"{prefix}{idx}."))
    else:
        value = fmt(obj) if isinstance(obj, float) else obj
        out[prefix[:-1]] = value
    return out


# --- torsion ------------------------------------------------------------------


def _build_input_complex(args):
    if args.input is not None:
        return complex_from_json(args.input), f"json:{args.input}"
    if args.preset is None:
        raise SchemaError("provide either --input or --preset")
    params = {}
    if args.preset == "circle":
        params["theta"] = args.theta if args.theta is not None else 1.0
    elif args.preset == "torus2":
        params["alpha"] = args.alpha if args.alpha is not None else 1.0
        params["beta"] = args.beta_angle if args.beta_angle is not None else 0.3
    elif args.preset in ("interval", "point"):
        params["rank"] = args.rank
    else:
        raise SchemaError(f"unknown preset {args.preset!r}")
    return build_preset(args.preset, **params), f"preset:{args.preset}"


def cmd_torsion(args) -> int:
    cplx, source = _build_input_complex(args)
    if args.metric.startswith("random:"):
        rng = np.random.default_rng(int(args.metric.split(":", 1)[1]))
        metric = ChainMetric.random_spd(cplx, rng)
    elif args.metric == "identity":
        metric = ChainMetric.identity(cplx)
    else:
        raise SchemaError(f"metric spec must be identity or random:SEED, "
                          f"got {args.metric!r}")
    n = cplx.dimension
    beta = parse_beta(args.beta, n + 1)
    classification = classify_beta(beta)
    if not classification.satisfies_recurrence:
        print("warning: beta not in span{1,k}; the value is metric dependent",
              file=sys.stderr)
    tr_logs, spectra = [], []
    for k in range(n + 1):
        spec = spectral_data(cplx, metric, k)
        if spec.kernel_dim:
            raise NotAcyclic(f"degree {k} has a {spec.kernel_dim}-dimensional kernel")
        tr_logs.append(tr_log(spec, strict=True))
        spectra.append([float(lam) for lam in spec.eigenvalues])
    log_t = generalized_log_torsion(tr_logs, beta)
    payload = {
        "source": source,
        "rank": cplx.rank,
        "dims": list(cplx.dims),
        "beta": list(beta),
        "beta_in_invariant_span": classification.satisfies_recurrence,
        "tr_log": list(tr_logs),
        "spectra": spectra,
        "log_torsion": log_t,
    }
    if args.metric == "identity":
        payload["log_torsion_minor_oracle"] = determinant_oracle(cplx)
    lines = [f"source          {source}",
             f"beta            {', '.join(fmt(b) for b in beta)}"]
    lines += [f"tr log L_{k}      {fmt(t)}" for k, t in enumerate(tr_logs)]
    lines.append(f"log torsion     {fmt(log_t)}")
    if "log_torsion_minor_oracle" in payload:
        lines.append(f"minor oracle    {fmt(payload['log_torsion_minor_oracle'])}")
    _emit(args, payload, lines)
    return 0


# --- zeta ---------------------------------------------------------------------


def _build_spectral_model(args):
    if args.model == "circle":
        return mdl.build_model("circle", L=args.L, theta=args.theta or 0.0,
                               rank=args.rank)
    if args.model == "torus":
        return mdl.build_model("torus", n=args.n, L=args.L)
    if args.model == "sphere2":
        return mdl.build_model("sphere2")
    if args.model == "interval":
        return bnd.build_interval(args.R, args.condition, rank=args.rank)
    if args.model == "cylinder":
        return bnd.build_cylinder(args.R, args.L, args.condition)
    raise SchemaError(f"unknown model {args.model!r}")


def cmd_zeta(args) -> int:
    model = _build_spectral_model(args)
    if not 0 <= args.degree <= model.dim:
        raise SchemaError(f"degree must lie in 0..{model.dim}")
    ev = model.zeta(args.degree, args.s, derivative=args.derivative)
    payload = {
        "model": model.name,
        "degree": args.degree,
        "s": args.s,
        "value": ev.value,
        "abs_error_estimate": ev.abs_error_estimate,
        "kernel_dim": ev.kernel_dim,
    }
    lines = [f"model           {model.name}",
             f"zeta_{args.degree}({fmt(args.s)})    {fmt(ev.value)}",
             f"error estimate  {fmt(ev.abs_error_estimate)}",
             f"kernel dim      {ev.kernel_dim}"]
    if args.derivative:
        payload["derivative"] = ev.derivative
        lines.insert(2, f"d/ds            {fmt(ev.derivative)}")
    _emit(args, payload, lines)
    return 0


# --- model torsion --------------------------------------------------------------


def cmd_model_torsion(args) -> int:
    model = _build_spectral_model(args)
    beta = parse_beta(args.beta, model.dim + 1)
    if args.model in BOUNDARY_MODELS:
        report = bnd.boundary_residue_torsion(model, beta)
        if args.kind != "residue":
            raise SchemaError("boundary models support --kind residue only")
    elif args.kind == "residue":
        report = mdl.residue_torsion(model, beta)
    elif args.kind == "analytic":
        report = mdl.analytic_torsion(model, beta)
    else:
        res = mdl.residue_torsion(model, beta)
        ana = mdl.analytic_torsion(model, beta)
        report = mdl.TorsionReport(
            model=res.model, beta=res.beta, betti=res.betti, zeta0=res.zeta0,
            residue_traces=res.residue_traces,
            log_torsion_res=res.log_torsion_res,
            log_torsion_zeta=ana.log_torsion_zeta, zeta_prime0=ana.zeta_prime0,
            abs_error_estimate=ana.abs_error_estimate)
    payload = report.as_dict()
    lines = [f"model           {report.model}",
             f"beta            {', '.join(fmt(b) for b in report.beta)}",
             f"betti           {list(report.betti)}",
             "zeta(0)         " + ", ".join(fmt(z) for z in report.zeta0),
             "res(log L)      " + ", ".join(fmt(r) for r in report.residue_traces)]
    if report.log_torsion_res is not None:
        lines.append(f"log T (residue) {fmt(report.log_torsion_res)}")
    if report.log_torsion_zeta is not None:
        lines.append(f"log T (zeta)    {fmt(report.log_torsion_zeta)}")
    _emit(args, payload, lines)
    return 0


# --- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    results = run_suites(args.suite, tol=args.tol, seed=args.seed)
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "cases": [r.as_dict() for r in results],
        "n_cases": len(results),
        "n_failed": sum(not r.passed for r in results),
    }
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{mark}  {r.case_id:55s} measured {r.measured:.3e} "
                     f"tol {r.tolerance:.1e}  [{r.provenance}]")
    lines.append(f"{payload['n_cases'] - payload['n_failed']}/"
                 f"{payload['n_cases']} cases passed")
    _emit(args, payload, lines)
    return 1 if payload["n_failed"] else 0


# --- gluing ---------------------------------------------------------------------


def cmd_gluing(args) -> int:
    report = bnd.gluing_check(args.geometry, R=args.R, L=args.L,
                              split=args.split, outer=args.outer,
                              tol=args.tol if args.tol is not None else 1e-8)
    payload = report.as_dict()
    lines = [f"geometry        {report.geometry} (outer {report.outer_condition}, "
             f"split at {fmt(report.split)})",
             f"lhs             {fmt(report.lhs)}",
             f"piece 1         {fmt(report.piece1)}",
             f"piece 2         {fmt(report.piece2)}",
             f"interface T     {fmt(report.interface_torsion)}",
             f"chi(Y)/2        {fmt(report.half_chi_interface)}",
             f"rhs             {fmt(report.rhs)}",
             f"discrepancy     {fmt(report.discrepancy)}",
             f"ok              {report.ok}"]
    _emit(args, payload, lines)
    return 0 if report.ok else 1


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsionlab",
        description="Torsion invariants of twisted complexes and model spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--csv", action="store_true", help="flat key,value output")
    common.add_argument("--tol", type=float, default=None,
                        help="override verification tolerances")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized cases")

    p = sub.add_parser("torsion", parents=[common],
                       help="log torsion of a twisted chain complex")
    p.add_argument("--input", help="path to a complex JSON file")
    p.add_argument("--preset", choices=("circle", "torus2", "interval", "point"))
    p.add_argument("--theta", type=float, help="circle twisting angle")
    p.add_argument("--alpha", type=float, help="torus2 first angle")
    p.add_argument("--beta-angle", type=float, help="torus2 second angle")
    p.add_argument("--rank", type=int, default=1, help="trivial coefficient rank")
    p.add_argument("--beta", default="k", help="weights: 1 | k | lin:l,m | list")
    p.add_argument("--metric", default="identity", help="identity | random:SEED")
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("zeta", parents=[common],
                       help="evaluate a model spectral zeta function")
    p.add_argument("--model", required=True,
                   choices=CLOSED_MODELS + BOUNDARY_MODELS)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--derivative", action="store_true")
    _model_params(p)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("model-torsion", parents=[common],
                       help="residue/analytic torsion of a model geometry")
    p.add_argument("--model", required=True,
                   choices=CLOSED_MODELS + BOUNDARY_MODELS)
    p.add_argument("--kind", choices=("residue", "analytic", "both"),
                   default="residue")
    p.add_argument("--beta", default="k", help="weights: 1 | k | lin:l,m | list")
    _model_params(p)
    p.set_defaults(func=cmd_model_torsion)

    p = sub.add_parser("verify", parents=[common],
                       help="run the verification suites")
    p.add_argument("--suite", default="all",
                   choices=("combinatorial", "closed-spectral", "boundary",
                            "variation", "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gluing", parents=[common],
                       help="check the torsion gluing identity")
    p.add_argument("--geometry", choices=("interval", "cylinder"),
                   default="interval")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--L", type=float, default=2.0 * math.pi)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--outer", choices=("relative", "absolute"), default="absolute")
    p.set_defaults(func=cmd_gluing)

    return parser


def _model_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", type=float, default=2.0 * math.pi,
                   help="circle circumference")
    p.add_argument("--theta", type=float, default=None, help="circle character angle")
    p.add_argument("--rank", type=int, default=1, help="coefficient rank")
    p.add_argument("--n", type=int, default=2, help="torus dimension")
    p.add_argument("--R", type=float, default=1.0, help="interval/cylinder length")
    p.add_argument("--condition", choices=("relative", "absolute", "mixed"),
                   default="relative")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotAcyclic, NotAcyclicPreset) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PoleHit, PoleAtOne) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except TorsionLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
