"""Command-line entry point.

    shapeapprox <subcommand> [options]

Subcommands: gen-poly, apply, moduli, shape, jackson, bern-xeps, mn-study,
lambda2, gen-report.  Tabular results are CSV with the full configuration and
a content hash embedded as comment lines; the exit code is 0 exactly when all
in-run assertions pass.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys

import mpmath

from . import experiments
from .best_approx import best_qmonotone, jackson_ratio
from .experiments import ExperimentTable
from .functions import catalog
from .generator import build_generator
from .moduli import omega_dt
from .operators import (
    bernstein_image,
    durrmeyer_lupas_image,
    genuine_durrmeyer_image,
    mn_image,
)
from .polynomial import Polynomial
from .shape import check_k_monotone_fn, check_k_monotone_poly


def _float_list(text: str):
    return [float(v) for v in text.split(",") if v]


def _int_list(text: str):
    return [int(v) for v in text.split(",") if v]


def _load_function(spec: str):
    """Catalog name, or a path to a polynomial JSON file."""
    if spec.endswith(".json"):
        with open(spec) as fh:
            return Polynomial.from_json(fh.read())
    return catalog(spec)


def _emit(table: ExperimentTable, out: str | None) -> int:
    text = table.to_csv()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"wrote {out}")
        for k, v in table.assertions.items():
            print(f"assert {k}: {'pass' if v else 'FAIL'}")
    else:
        print(text, end="")
    return 0 if table.ok else 1


def _cmd_gen_poly(args) -> int:
    gen = build_generator(args.n, args.r, args.precision_bits)
    payload = {
        "n": gen.n,
        "r": gen.r,
        "m": gen.m,
        "precision_bits": gen.precision_bits,
        "moment_deficiency": {
            str(mu): format(float(d), ".17g") for mu, d in gen.moment_deficiency.items()
        },
        "P": json.loads(gen.P.to_json()),
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _cmd_apply(args) -> int:
    f = _load_function(args.f)
    if args.op == "bernstein":
        poly = bernstein_image(args.n, f)
    elif args.op == "genuine-durrmeyer":
        poly = genuine_durrmeyer_image(args.n, f)
    elif args.op == "durrmeyer":
        poly = durrmeyer_lupas_image(args.n, 0, f)
    elif args.op == "lupas":
        poly = durrmeyer_lupas_image(args.n, args.alpha, f)
    elif args.op == "mn":
        poly = mn_image(args.q, args.n, f, args.precision_bits).poly
    else:
        raise SystemExit(f"unknown operator {args.op!r}")
    xs = _float_list(args.x) if args.x else [i / 16 for i in range(17)]
    table = ExperimentTable(
        name="apply",
        config={"op": args.op, "n": args.n, "q": args.q, "alpha": args.alpha,
                "f": args.f, "precision_bits": args.precision_bits},
        columns=["x", "value"],
    )
    with mpmath.workprec(args.precision_bits + 2 * poly.degree + 64):
        pf = poly.to_float() if poly.backend == "exact" else poly
        for x in xs:
            table.rows.append([x, float(pf(mpmath.mpf(x)))])
    return _emit(table, args.out)


def _cmd_moduli(args) -> int:
    f = _load_function(args.f)
    table = ExperimentTable(
        name="moduli",
        config={"f": args.f, "k": args.k, "lambda": args.lam,
                "t_grid": args.t_grid},
        columns=["t", "value", "argmax_h", "argmax_x"],
    )
    prev = 0.0
    monotone = True
    for t in _float_list(args.t_grid):
        est = omega_dt(f, args.k, args.lam, t)
        monotone &= est.value >= prev - 1e-15
        prev = est.value
        table.rows.append([t, est.value, est.argmax_h, est.argmax_x])
    table.assertions["nondecreasing_in_t"] = monotone
    return _emit(table, args.out)


def _cmd_shape(args) -> int:
    if args.f.endswith(".json"):
        with open(args.f) as fh:
            poly = Polynomial.from_json(fh.read())
        report = check_k_monotone_poly(poly, args.k)
    else:
        report = check_k_monotone_fn(catalog(args.f), args.k)
    payload = dataclasses.asdict(report)
    payload["f"] = args.f
    text = json.dumps(payload, indent=2, default=float)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0 if report.passed else 1


def _cmd_jackson(args) -> int:
    f = _load_function(args.f)
    table = ExperimentTable(
        name="jackson",
        config={"f": args.f, "q": args.q, "n_list": args.n_list},
        columns=["n", "constrained_error", "omega2_phi", "ratio"],
    )
    ratios = []
    for n in _int_list(args.n_list):
        res = best_qmonotone(f, args.q, n)
        om = omega_dt(f, 2, 1.0, 1.0 / n).value
        ratio = jackson_ratio(f, args.q, n)
        ratios.append(ratio)
        table.rows.append([n, res.error, om, ratio])
    table.assertions["ratios_finite"] = all(r == r and r != float("inf") for r in ratios)
    return _emit(table, args.out)


def _cmd_bern_xeps(args) -> int:
    table = experiments.run_bernstein_xeps(args.eps, args.lam, _int_list(args.n_list))
    return _emit(table, args.out)


def _cmd_mn_study(args) -> int:
    f = _load_function(args.f)
    table = experiments.run_mn_error_study(
        args.q, args.lam, f, _int_list(args.n_list), args.precision_bits
    )
    return _emit(table, args.out)


def _cmd_lambda2(args) -> int:
    table = experiments.run_lambda2_counterexample(_float_list(args.eps_list), args.n)
    return _emit(table, args.out)


def _cmd_gen_report(args) -> int:
    table = experiments.run_generator_report(
        args.r, _int_list(args.n_list), args.precision_bits
    )
    return _emit(table, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapeapprox",
        description="Shape-preserving polynomial operators, moduli of "
        "smoothness, and constrained best approximation on [0,1].",
    )
    parser.add_argument("--config", help="JSON file of default option values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (CSV/JSON); stdout if omitted")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--precision-bits", type=int, default=256,
                       dest="precision_bits")

    p = sub.add_parser("gen-poly", help="build a generating polynomial")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(fn=_cmd_gen_poly)

    p = sub.add_parser("apply", help="apply an operator to a function")
    common(p)
    p.add_argument("--op", required=True,
                   choices=["bernstein", "genuine-durrmeyer", "durrmeyer",
                            "lupas", "mn"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--f", required=True)
    p.add_argument("--x", help="comma-separated evaluation points")
    p.set_defaults(fn=_cmd_apply)

    p = sub.add_parser("moduli", help="weighted modulus of smoothness")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--lambda", type=float, default=0.0, dest="lam")
    p.add_argument("--t-grid", required=True, dest="t_grid")
    p.set_defaults(fn=_cmd_moduli)

    p = sub.add_parser("shape", help="k-monotonicity verdict")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=_cmd_shape)

    p = sub.add_parser("jackson", help="constrained-error / modulus ratios")
    common(p)
    p.add_argument("--f", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n-list", required=True, dest="n_list")
    p.set_defaults(fn=_cmd_jackson)

    p = sub.add_parser("bern-xeps", help="Bernstein errors for x^eps")
    common(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--lambda", type=float, default=0.0, dest="lam")
    p.add_argument("--n-list", required=True, dest="n_list")
    p.set_defaults(fn=_cmd_bern_xeps)

    p = sub.add_parser("mn-study", help="composite-operator error study")
    common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--lambda", type=float, default=0.0, dest="lam")
    p.add_argument("--f", required=True)
    p.add_argument("--n-list", required=True, dest="n_list")
    p.set_defaults(fn=_cmd_mn_study)

    p = sub.add_parser("lambda2", help="lambda=2 counterexample family")
    common(p)
    p.add_argument("--eps-list", required=True, dest="eps_list")
    p.add_argument("--n", type=int, default=5)
    p.set_defaults(fn=_cmd_lambda2)

    p = sub.add_parser("gen-report", help="generating-polynomial moment report")
    common(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n-list", required=True, dest="n_list")
    p.set_defaults(fn=_cmd_gen_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            for key, value in json.load(fh).items():
                if getattr(args, key, None) in (None, parser.get_default(key)):
                    setattr(args, key, value)
    random.seed(getattr(args, "seed", 0))
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
