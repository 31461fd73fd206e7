"""Command-line entry point.

Commands: generate, train, predict, evaluate, describe.  Exit codes: 0 on
success, 1 on usage errors, 2 on data/validation errors, 3 on internal
failures.  Data goes to stdout (or --out), diagnostics to stderr.  All
commands are reproducible from their flags plus the seed; the default seed is
a fixed constant, not the clock.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .dataset import (
    DataError,
    EnvFactors,
    describe,
    generate_synthetic,
    load_dataset,
    load_profile,
    save_dataset,
)
from .ensemble import EnsembleConfig, TrainedEnsemble, predict_effort, train_ensemble
from .evaluation import compare, emit_report, loocv
from .models import ModelConfig

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ucp-ensemble", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic dataset from a profile")
    p.add_argument("--profile", required=True, help="profile key/value file")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("train", help="train an ensemble and save it as JSON")
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--alpha", type=float, default=15.0)
    p.add_argument("--replicates", type=int, default=25)
    p.add_argument("--out", required=True, help="output model JSON path")

    p = sub.add_parser("predict", help="predict productivity and effort for one project")
    p.add_argument("--model", required=True, help="trained ensemble JSON")
    p.add_argument("--env", required=True, help="comma-separated e1,...,e8 ratings")
    p.add_argument("--ucp", type=float, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("evaluate", help="LOOCV comparison of ensemble, base models, baselines")
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--alpha", type=float, default=15.0)
    p.add_argument("--replicates", type=int, default=25)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = sub.add_parser("describe", help="descriptive statistics of a dataset")
    p.add_argument("--data", required=True, help="dataset CSV")

    return parser


def _parse_env(text: str) -> EnvFactors:
    parts = [p.strip() for p in text.split(",")]
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise DataError(f"non-numeric environmental rating in {text!r}") from None
    return EnvFactors(vals)


def _cmd_generate(args, out) -> int:
    profile = load_profile(args.profile)
    ds = generate_synthetic(profile, args.seed)
    save_dataset(ds, args.out)
    print(f"wrote {len(ds)} records to {args.out}", file=sys.stderr)
    return EXIT_OK


def _ensemble_config(args) -> EnsembleConfig:
    return EnsembleConfig(alpha=args.alpha, replicates=args.replicates, seed=args.seed)


def _cmd_train(args, out) -> int:
    ds = load_dataset(args.data)
    ens = train_ensemble(ds, _ensemble_config(args))
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(ens.to_json(), fh, indent=2)
        fh.write("\n")
    print(f"trained ensemble on {len(ds)} records -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_predict(args, out) -> int:
    if not args.ucp > 0:
        raise DataError(f"non-positive UCP {args.ucp}")
    env = _parse_env(args.env)
    try:
        with open(args.model, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError:
        raise DataError(f"corrupt model file {args.model!r}") from None
    try:
        ens = TrainedEnsemble.from_json(doc)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    productivity, effort = predict_effort(ens, env, args.ucp)
    base = ens.base_predictions(env)
    weights = ens.weight_profile.combined
    total_w = sum(weights.values())
    if args.format == "json":
        doc = {
            "productivity": productivity,
            "effort": effort,
            "ucp": args.ucp,
            "base_productivities": base,
            "normalized_weights": {m: weights[m] / total_w for m in weights},
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"productivity {productivity:.6g} hours/UCP\n")
        out.write(f"effort       {effort:.6g} hours (UCP {args.ucp:.6g})\n")
        out.write(f"{'model':<8}{'productivity':>14}{'weight':>10}\n")
        for m in base:
            out.write(f"{m:<8}{base[m]:>14.6g}{weights[m] / total_w:>10.6g}\n")
    return EXIT_OK


def _cmd_evaluate(args, out) -> int:
    ds = load_dataset(args.data)
    outcomes = loocv(ds, _ensemble_config(args))
    report = compare(outcomes)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            emit_report(report, args.format, fh)
        print(f"wrote report to {args.out}", file=sys.stderr)
    else:
        emit_report(report, args.format, out)
    return EXIT_OK


def _cmd_describe(args, out) -> int:
    ds = load_dataset(args.data)
    if len(ds) < 2:
        raise DataError("describe needs at least 2 records")
    out.write(f"{'variable':<14}{'mean':>12}{'stdev':>12}{'skewness':>12}{'kurtosis':>12}\n")
    for label, values in (("ucp", ds.ucp_vector()),
                          ("effort", ds.effort_vector()),
                          ("productivity", ds.productivity_vector())):
        s = describe(values)
        skew = "undefined" if s.skewness is None else format(s.skewness, ".6g")
        kurt = "undefined" if s.kurtosis is None else format(s.kurtosis, ".6g")
        out.write(f"{label:<14}{s.mean:>12.6g}{s.stdev:>12.6g}{skew:>12}{kurt:>12}\n")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "describe": _cmd_describe,
}


def run(argv, stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, out)
    except (DataError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # anything unexpected is an internal failure
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))
