"""Command-line entry point.

Subcommands:
  eval    evaluate one instance from a JSON file
  verify  run seeded randomized verification campaigns
  sweep   tabulate extremal-family growth ratios to CSV

Exit codes: 0 success, 1 verification failure, 2 input/config error,
3 resource cap exceeded. The MOI_MAX_TUPLES environment variable overrides
the atomwise-oracle tuple cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .bounds import (
    RangeError,
    check_haagerup_like,
    check_haagerup_main,
    check_lemma_row,
    check_projective,
)
from .evaluate import (
    DEFAULT_TUPLE_CAP,
    CapExceededError,
    MoiInstance,
    duality_functional,
    eval_double_schur,
    eval_haagerup,
    eval_haagerup_block,
    eval_haagerup_like,
    eval_moi,
    eval_oracle,
    moi_scale,
)
from .integrands import (
    HaagerupChainRep,
    ProjectiveRep,
    embed_projective_in_haagerup,
    rep_norm_bound,
)
from .linalg import INF, check_exponent, schatten_norm
from .randominst import random_instance, rng_for
from .serialize import array_to_json, instance_from_json, instance_to_json
from .sharpness import REGIMES, growth_sweep, sharp_r, sweep_csv

DEFAULT_EXPONENTS = (2.0, 3.0, 4.0, INF)

# in-range Schatten pairs for the duality-defined integrals; the first-kind
# hypothesis is q >= 2, the second-kind p >= 2, both with 1/p + 1/q in [1/2, 1]
LIKE_PAIRS = {
    "first": ((2, 2), (2, 4), (4, 4), (2, INF), (1, INF), (4 / 3, 4), (2, 3)),
    "second": ((2, 2), (4, 2), (4, 4), (INF, 2), (INF, 1), (4, 4 / 3), (3, 2)),
}

# per-operator exponent tuples with sum of reciprocals <= 1
PROJECTIVE_EXPONENTS = {
    3: ((2, 2), (2, 4), (4, 2), (3, 3), (2, INF), (INF, INF), (1, INF), (4, 4)),
    4: ((3, 3, 3), (4, 4, 4), (2, 4, 4), (4, 4, 2), (2, INF, INF), (INF, INF, INF), (6, 6, 6)),
}


def _parse_int_list(text: str) -> list[int]:
    """Accept '2,3,4' or a range '2-6' or a single integer."""
    text = text.strip()
    if "-" in text and not text.startswith("-"):
        lo, hi = text.split("-", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_exponent(tok: str) -> float:
    tok = tok.strip().lower()
    if tok in ("inf", "infinity"):
        return INF
    return check_exponent(float(tok))


def _parse_exponent_list(text: str) -> list[float]:
    return [_parse_exponent(tok) for tok in text.split(",") if tok.strip()]


def _parse_s_token(tok: str, r: float) -> float:
    """An s value: a number, 'inf', 'r', '<a>r' (a times r), or 'r/<a>'."""
    tok = tok.strip().lower()
    if tok == "r":
        return r
    if tok.endswith("r") and tok != "r":
        return float(tok[:-1].rstrip("*")) * r
    if tok.startswith("r/"):
        return r / float(tok[2:])
    return _parse_exponent(tok)


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def cmd_eval(args) -> int:
    try:
        with open(args.instance, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        inst, _ = instance_from_json(payload)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        return _fail(f"eval: cannot load instance: {exc}", 2)
    cap = int(os.environ.get("MOI_MAX_TUPLES", DEFAULT_TUPLE_CAP))
    try:
        result = eval_oracle(inst, cap=cap) if args.oracle else eval_moi(inst)
    except CapExceededError as exc:
        return _fail(f"eval: {exc}", 3)
    out = {
        "result": array_to_json(result),
        "schatten": {
            "1": schatten_norm(result, 1),
            "2": schatten_norm(result, 2),
            "inf": schatten_norm(result, INF),
        },
        "rep_norm_bound": rep_norm_bound(inst.integrand),
    }
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _relative_deviation(a: np.ndarray, b: np.ndarray, scale: float) -> float:
    return float(np.abs(a - b).max() / scale)


def _suite_oracle_equivalence(config, k):
    """All evaluation paths against the exhaustive atomwise sum."""
    rng = rng_for(config["seed"], 1, k)
    classes = ("projective", "chain", "like-first", "like-second")
    cls = classes[k % len(classes)]
    inst = random_instance(rng, cls, config["dim_range"], config["width_range"])
    scale = moi_scale(inst)
    reference = eval_oracle(inst)
    values = [eval_moi(inst)]
    rep = inst.integrand
    if isinstance(rep, ProjectiveRep):
        embedded = embed_projective_in_haagerup(rep)
        values.append(eval_haagerup(MoiInstance(inst.measures, inst.operators, embedded)))
    if isinstance(rep, HaagerupChainRep):
        if inst.arity >= 3:
            values.append(eval_haagerup_block(inst))
        else:
            table = np.einsum("il,jl->ij", rep.head, rep.tail)
            values.append(
                eval_double_schur(table, inst.measures[0], inst.measures[1], inst.operators[0])
            )
    worst = max(_relative_deviation(v, reference, scale) for v in values)
    return worst, inst


def _suite_duality(config, k):
    """trace(W Q) against the defining functional, both kinds, arity 3 and 4."""
    rng = rng_for(config["seed"], 2, k)
    kind = ("first", "second")[k % 2]
    arity = (3, 4)[(k // 2) % 2]
    inst = random_instance(
        rng, f"like-{kind}", config["dim_range"], config["width_range"], arity=arity
    )
    w = eval_haagerup_like(inst)
    scale = moi_scale(inst)
    worst = 0.0
    for _ in range(config["duality_probes"]):
        q = rng.standard_normal((inst.dim, inst.dim)) + 1j * rng.standard_normal(
            (inst.dim, inst.dim)
        )
        denom = max(scale * schatten_norm(q, 1), 1e-12)
        gap = abs(complex(np.trace(w @ q)) - duality_functional(inst, q)) / denom
        worst = max(worst, gap)
    return worst, inst


def _suite_bound_projective(config, k):
    rng = rng_for(config["seed"], 3, k)
    arity = (3, 4)[k % 2]
    inst = random_instance(
        rng, "projective", config["dim_range"], config["width_range"], arity=arity
    )
    options = PROJECTIVE_EXPONENTS[arity]
    exps = options[int(rng.integers(len(options)))]
    report = check_projective(inst, exps, tol=config["tol"])
    return report.ratio, inst


def _suite_bound_haagerup(config, k):
    rng = rng_for(config["seed"], 4, k)
    arity = (3, 4)[k % 2]
    inst = random_instance(
        rng, "chain", config["dim_range"], config["width_range"], arity=arity
    )
    exps = config["exponents"]
    p = exps[int(rng.integers(len(exps)))]
    q = exps[int(rng.integers(len(exps)))]
    report = check_haagerup_main(inst, p, q, tol=config["tol"])
    return report.ratio, inst


def _suite_bound_like(config, k):
    rng = rng_for(config["seed"], 5, k)
    kind = ("first", "second")[k % 2]
    arity = (3, 4)[(k // 2) % 2]
    inst = random_instance(
        rng, f"like-{kind}", config["dim_range"], config["width_range"], arity=arity
    )
    pairs = LIKE_PAIRS[kind]
    p, q = pairs[int(rng.integers(len(pairs)))]
    report = check_haagerup_like(inst, p, q, tol=config["tol"])
    return report.ratio, inst


def _suite_lemma_row(config, k):
    """Row-matrix bound with blocks integrated from a sup-normalized head."""
    rng = rng_for(config["seed"], 6, k)
    inst = random_instance(rng, "chain", config["dim_range"], config["width_range"], arity=3)
    rep = inst.integrand
    sup = float(np.linalg.norm(rep.head, axis=1).max())
    head = rep.head / sup
    normalized = MoiInstance(
        inst.measures, inst.operators, HaagerupChainRep(head, rep.middles, rep.tail)
    )
    projs = normalized.measures[0].projection_stack()
    blocks = list(np.tensordot(head, projs, axes=([0], [0])))
    exps = config["exponents"]
    p = exps[int(rng.integers(len(exps)))]
    report = check_lemma_row(blocks, normalized.operators[0], p, tol=config["tol"])
    return report.ratio, normalized


SUITES = (
    ("oracle-equivalence", _suite_oracle_equivalence, "deviation"),
    ("duality", _suite_duality, "deviation"),
    ("bound-projective", _suite_bound_projective, "ratio"),
    ("bound-haagerup-main", _suite_bound_haagerup, "ratio"),
    ("bound-haagerup-like", _suite_bound_like, "ratio"),
    ("lemma-row", _suite_lemma_row, "ratio"),
)


def cmd_verify(args) -> int:
    try:
        if args.trials < 1:
            raise ValueError(f"trials must be >= 1, got {args.trials}")
        dims = _parse_int_list(args.dims)
        widths = _parse_int_list(args.widths)
        if not dims or not widths:
            raise ValueError("dims and widths must be nonempty")
        if min(dims) < 1 or min(widths) < 1:
            raise ValueError("dims and widths must be >= 1")
        exponents = tuple(_parse_exponent_list(args.exponents))
        if not exponents:
            raise ValueError("exponent set must be nonempty")
        for p in exponents:
            if p < 2.0:
                raise RangeError(
                    f"exponent {p} < 2 is outside the hypotheses of the chain and"
                    " row bounds; the extremal sweep explores that range instead"
                )
        tol = float(args.tol)
    except (ValueError, RangeError) as exc:
        return _fail(f"verify: invalid configuration: {exc}", 2)

    config = {
        "seed": args.seed,
        "dim_range": (min(dims), max(dims)),
        "width_range": (min(widths), max(widths)),
        "exponents": exponents,
        "tol": tol,
        "duality_probes": 5,
    }
    threshold = {"deviation": tol, "ratio": 1.0 + tol}
    print(f"verify: seed={args.seed} trials={args.trials}")
    print(f"{'suite':<22} {'trials':>6} {'worst':>18} pass")
    failures = []
    for name, run, metric in SUITES:
        worst = 0.0
        worst_trial, worst_inst = None, None
        for k in range(args.trials):
            value, inst = run(config, k)
            if worst_inst is None or value > worst:
                worst, worst_trial, worst_inst = value, k, inst
        ok = worst <= threshold[metric]
        print(f"{name:<22} {args.trials:>6} {worst:>18.12e} {'yes' if ok else 'NO'}")
        if not ok:
            path = os.path.join(
                args.repro_dir, f"moi-repro-{name}-seed{args.seed}-trial{worst_trial}.json"
            )
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(instance_to_json(worst_inst), fh, indent=2)
                fh.write("\n")
            failures.append((name, worst_trial, path))
    if failures:
        for name, trial, path in failures:
            print(
                f"verify: suite {name} failed at trial {trial}; instance dumped to {path}",
                file=sys.stderr,
            )
        print("verify: FAIL")
        return 1
    print("verify: PASS")
    return 0


def cmd_sweep(args) -> int:
    try:
        dims = _parse_int_list(args.dims)
        if not dims:
            raise ValueError("need a nonempty list of truncation dimensions")
        p1 = _parse_exponent(args.p1)
        pm1 = _parse_exponent(args.pm1)
        if args.regime not in REGIMES:
            raise ValueError(f"unknown regime {args.regime!r}; one of {REGIMES}")
        r = sharp_r(p1, pm1)
        s_values = [_parse_s_token(tok, r) for tok in args.s.split(",") if tok.strip()]
        if not s_values:
            raise ValueError("need at least one s value")
        rows = []
        for s in s_values:
            rows.extend(
                growth_sweep(args.arity, args.regime, p1, pm1, dims, s)
            )
    except (ValueError, RangeError) as exc:
        return _fail(f"sweep: invalid case: {exc}", 2)
    text = sweep_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moilab",
        description="evaluate multiple operator integrals, verify their Schatten "
        "norm bounds, and sweep the extremal families",
        epilog="exit codes: 0 success, 1 verification failure, 2 input/config "
        "error, 3 resource cap; MOI_MAX_TUPLES overrides the atomwise cap",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an instance from a JSON file")
    p_eval.add_argument("--instance", required=True, help="instance JSON path")
    p_eval.add_argument("--out", default=None, help="output JSON path (default stdout)")
    p_eval.add_argument(
        "--oracle", action="store_true", help="force the exhaustive atomwise sum"
    )
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="run seeded verification campaigns")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=50)
    p_verify.add_argument("--dims", default="2-6", help="ambient dimensions, e.g. 2-6 or 3,4")
    p_verify.add_argument("--widths", default="1-3", help="index widths, e.g. 1-3")
    p_verify.add_argument(
        "--exponents",
        default="2,3,4,inf",
        help="Schatten exponents for the chain and row bounds (each >= 2)",
    )
    p_verify.add_argument("--tol", type=float, default=1e-9)
    p_verify.add_argument(
        "--repro-dir", default=".", help="directory for failure reproduction files"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="extremal-family growth table to CSV")
    p_sweep.add_argument("--regime", required=True, help="/".join(REGIMES))
    p_sweep.add_argument("--arity", type=int, default=3, choices=(3, 4))
    p_sweep.add_argument("--p1", required=True, help="exponent of the first operator")
    p_sweep.add_argument("--pm1", required=True, help="exponent of the last operator")
    p_sweep.add_argument(
        "--s",
        required=True,
        help="comma list of Schatten exponents; accepts r, 0.8r, r/2",
    )
    p_sweep.add_argument("--dims", required=True, help="ascending truncation sizes")
    p_sweep.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
