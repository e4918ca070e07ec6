"""Command-line entry point.

Exit codes: 0 all identities zero / command succeeded, 1 an identity failed,
2 usage, input or output error.  Every JSON payload is written with sorted
keys so identical configurations give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .dsl import SUITES, DSLError, check_identity_zero, suite_items
from .fock import (
    cauchy_riemann_residual,
    ck_extension,
    fischer_decompose,
    hermite_report,
    hermite_sequence,
    monogenic_part,
)
from .maxwell import MaxwellSolution, maxwell_solution, monogenic_seeds, numeric_residual, sample_field
from .opcalc import D, apply
from .polyfun import CliffordPolynomial, WeightedFunction
from .scalars import rational_str

ENV_DEGREE = "CLIFOP_DEGREE"
ENV_THREADS = "CLIFOP_THREADS"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 3
    degree_bound: int = 5
    threads: int = 1
    options: dict = field(default_factory=dict)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"environment variable {name} must be an integer, got {raw!r}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if hasattr(obj, "denominator"):
        return rational_str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}")


def _load_poly(path: str) -> CliffordPolynomial:
    data = _read_json(path)
    try:
        return CliffordPolynomial.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a polynomial payload: {exc}")


def _check_n(n: int):
    if not 1 <= n <= 16:
        raise UsageError(f"n must lie in 1..16, got {n}")


# ---------------------------------------------------------------- verify


def _run_item(args):
    expr, n, bound, order, tag = args
    return check_identity_zero(expr, n, bound, order, tag=tag)


def _map(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def _report_md(reports) -> str:
    lines = ["| identity | n | degree | verdict | witness |", "|---|---|---|---|---|"]
    for r in reports:
        name = r.tag or r.expression
        wit = "" if r.is_zero else f"{r.witness} (lambda^{r.lambda_order})" if r.lambda_order else str(r.witness)
        lines.append(f"| `{name}` | {r.n} | {r.bound} | {r.verdict} | {wit} |")
    return "\n".join(lines) + "\n"


def cmd_verify(cfg: RunConfig) -> int:
    o = cfg.options
    if (o["expr"] is None) == (o["suite"] is None):
        raise UsageError("give exactly one of --expr or --suite")
    if cfg.degree_bound < 0:
        raise UsageError("degree bound must be >= 0")
    if o["expr"] is not None:
        jobs = [(o["expr"], cfg.n, cfg.degree_bound, o["order"], "")]
    else:
        jobs = [
            (it.expr, cfg.n, cfg.degree_bound if it.bound is None else it.bound,
             it.max_lambda_order if o["order"] is None else o["order"], it.tag)
            for it in suite_items(o["suite"], cfg.n)
        ]
    try:
        reports = _map(_run_item, jobs, cfg.threads)
    except DSLError as exc:
        raise UsageError(str(exc))
    if o["report"] == "md":
        text = _report_md(reports)
    else:
        text = "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in reports)
    _write(text, o["out"])
    return EXIT_OK if all(r.is_zero for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------- generators


def cmd_gen_hermite(cfg: RunConfig) -> int:
    o = cfg.options
    seed = _load_poly(o["seed_file"]) if o["seed_file"] else CliffordPolynomial.constant(cfg.n)
    if o["k"] < 0:
        raise UsageError("--k must be >= 0")
    monogenized = False
    try:
        if not apply(D, seed).is_zero():
            seed = monogenic_part(seed)
            monogenized = True
        states = hermite_sequence(seed, o["k"])
        report = hermite_report(seed, o["k"])
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = {
        "n": seed.n,
        "seed": seed.to_json(),
        "seed_monogenized": monogenized,
        "states": [st.to_json() for st in states],
        "ratios": report["rows"],
    }
    _write(dumps(payload), o["out"])
    return EXIT_OK


def cmd_gen_maxwell(cfg: RunConfig) -> int:
    o = cfg.options
    if o["seed_file"]:
        seed = _load_poly(o["seed_file"])
    else:
        if o["s"] is None or o["s"] < 0:
            raise UsageError("--s (>= 0) is required without --seed-file")
        seed = monogenic_seeds(cfg.n, o["s"])[-1]
    try:
        sol = maxwell_solution(seed, o["s"], monogenic=not o["general"])
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = sol.to_json()
    if o["numeric"]:
        lams = [float(v) for v in o["lambda"]]
        payload["numeric"] = {
            "lambda": o["lambda"],
            "points": o["points"],
            "rng_seed": o["rng_seed"],
            "samples": {v: sample_field(sol, float(v), o["points"], o["rng_seed"]) for v in o["lambda"]},
            "max_pde_residual": numeric_residual(sol, lams, o["points"], o["rng_seed"], "pde"),
            "max_eigen_residual": numeric_residual(sol, lams, o["points"], o["rng_seed"], "eigen"),
        }
    _write(dumps(payload), o["out"])
    return EXIT_OK


def cmd_decompose(cfg: RunConfig) -> int:
    o = cfg.options
    p = _load_poly(o["input"])
    try:
        parts = fischer_decompose(p, full=o["full"])
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = {"input": p.to_json(), "full": o["full"], "parts": [m.to_json() for m in parts]}
    _write(dumps(payload), o["out"])
    return EXIT_OK


def cmd_ck_extend(cfg: RunConfig) -> int:
    o = cfg.options
    f = _load_poly(o["input"])
    try:
        F = ck_extension(f)
    except ValueError as exc:
        raise UsageError(str(exc))
    res = cauchy_riemann_residual(F)
    _write(dumps({"input": f.to_json(), "extension": F.to_json(), "residual_zero": res.is_zero()}), o["out"])
    return EXIT_OK


def _load_evaluable(data):
    if isinstance(data, dict) and "cosh_part" in data:
        return MaxwellSolution.from_json(data)
    if isinstance(data, dict) and "terms" in data:
        return WeightedFunction.from_json(data)
    raise UsageError("input is neither a polynomial nor a Maxwell solution payload")


def cmd_eval(cfg: RunConfig) -> int:
    o = cfg.options
    try:
        obj = _load_evaluable(_read_json(o["input"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot load {o['input']}: {exc}")
    lam = float(o["lambda"])
    if isinstance(obj, MaxwellSolution):
        fn, syms, n = obj.field(), obj.numeric_symbols(lam), obj.n
    else:
        fn, syms, n = obj, {"lambda": lam}, obj.poly.n
    rng = random.Random(o["rng_seed"])
    samples = []
    for _ in range(o["points"]):
        pt = [rng.uniform(-1, 1) for _ in range(n)]
        vals = fn.evaluate(pt, **syms)
        samples.append({"point": pt, "value": {str(m): vals[m] for m in sorted(vals)}})
    payload = {"numeric": {"lambda": o["lambda"], "rng_seed": o["rng_seed"], "samples": samples}}
    _write(dumps(payload), o["out"])
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "gen-hermite": cmd_gen_hermite,
    "gen-maxwell": cmd_gen_maxwell,
    "decompose": cmd_decompose,
    "ck-extend": cmd_ck_extend,
    "eval": cmd_eval,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clifop", description="Exact Clifford-analytic operator calculus.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, degree=False):
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        if degree:
            p.add_argument("--degree", type=int, default=None, help=f"degree bound (env {ENV_DEGREE}, default 5)")

    p = sub.add_parser("verify", help="check an operator identity or a builtin suite")
    common(p, degree=True)
    p.add_argument("--expr", default=None)
    p.add_argument("--suite", choices=SUITES, default=None)
    p.add_argument("--order", type=int, default=None, help="lambda order to compare up to")
    p.add_argument("--report", choices=("json", "md"), default="json")

    p = sub.add_parser("gen-hermite", help="Clifford-Hermite states and norms")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed-file", default=None)

    p = sub.add_parser("gen-maxwell", help="closed-form Maxwell-type solution")
    common(p)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--seed-file", default=None)
    p.add_argument("--general", action="store_true", help="use the form for non-monogenic seeds")
    p.add_argument("--numeric", action="store_true")
    p.add_argument("--lambda", dest="lambda", nargs="+", default=["1.0"])
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--rng-seed", type=int, default=0)

    p = sub.add_parser("decompose", help="Fischer decomposition of a homogeneous polynomial")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--full", action="store_true")

    p = sub.add_parser("ck-extend", help="Cauchy-Kowalevskaya extension")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("eval", help="sample a stored function at random points")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--lambda", dest="lambda", default="1.0")
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--rng-seed", type=int, default=0)
    return parser


def make_config(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    n = args.pop("n", 3)
    _check_n(n)
    degree = args.pop("degree", None)
    if degree is None:
        degree = _env_int(ENV_DEGREE, 5)
    threads = max(1, _env_int(ENV_THREADS, 1))
    return RunConfig(command, n, degree, threads, args)


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        return run(make_config(argv))
    except UsageError as exc:
        sys.stderr.write(f"clifop: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
