"""Command-line front end for the entropy-inequality laboratory.

Subcommands
-----------
check    run checker suites on seeded random ensembles, write JSON/CSV reports
markov   build a block-structured state from a spec file and print signatures
trotter  compressed-product trace study (random trials or a given state file)
explore  sweep an open inequality and report the slack distribution
replay   rerun a dumped worst-case instance

Exit codes: 0 success, 1 failed check, 2 configuration error, 3 candidate
counterexample (explore/replay only).  The environment variable QEL_SEED
overrides --seed when set.  Reports are byte-identical for identical
(seed, config) pairs; human-readable summaries go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import checks
from .errors import BadConfig, QelabError
from .results import as_record, records_to_csv, records_to_json
from .serialize import deserialize_instance, serialize_instance
from .states import markov_spec_from_json, markov_state, state_from_json
from .suites import SUITES, run_suite
from .tolerances import DEFAULT_EPS, TOL_INEQ

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_CANDIDATE = 3


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise BadConfig(f"cannot parse dims {text!r}: {exc}") from exc
    if not dims or any(d < 1 for d in dims):
        raise BadConfig(f"dims must all be >= 1, got {text!r}")
    return dims


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise BadConfig(f"cannot parse {flag} {text!r}: {exc}") from exc
    if not values:
        raise BadConfig(f"{flag} must not be empty")
    return values


def _effective_seed(seed: int) -> int:
    env = os.environ.get("QEL_SEED")
    if env is None:
        return seed
    try:
        return int(env)
    except ValueError as exc:
        raise BadConfig(f"QEL_SEED must be an integer, got {env!r}") from exc


def _trotter_n_values(nmax: int) -> tuple[int, ...]:
    if nmax < 1:
        raise BadConfig(f"--nmax must be >= 1, got {nmax}")
    values = [1]
    while values[-1] * 2 <= nmax:
        values.append(values[-1] * 2)
    return tuple(values)


def _suite_opts(args) -> dict:
    opts: dict = {}
    if getattr(args, "alpha", None):
        alphas = _parse_floats(args.alpha, "--alpha")
        opts["alphas"] = alphas
        opts["sbw_alphas"] = sorted(set(alphas), reverse=True)
    if getattr(args, "t_samples", None):
        opts["t_samples"] = _parse_floats(args.t_samples, "--t-samples")
    if getattr(args, "nmax", None):
        opts["n_values"] = _trotter_n_values(args.nmax)
    return opts


def _write_report(records: list[dict], fmt: str, out: str | None) -> None:
    text = records_to_json(records) if fmt == "json" else records_to_csv(records)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _worst_dump_path(out: str | None) -> str:
    return (out + ".worst.json") if out else "qelab-worst.json"


def _dump_instance(
    path: str,
    checker: str,
    dims: Sequence[int],
    seed: int,
    trial: int,
    tolerance: float,
    instance: dict,
    opts: dict,
) -> None:
    payload = {
        "checker": checker,
        "dims": list(dims),
        "seed": seed,
        "trial": trial,
        "tolerance": tolerance,
        "opts": opts,
        "instance": serialize_instance(instance),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def _say(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    dims = _parse_dims(args.dims)
    seed = _effective_seed(args.seed)
    if args.tol <= 0:
        raise BadConfig(f"--tol must be positive, got {args.tol}")
    if args.suite == "all":
        names = list(SUITES)
    else:
        names = [p.strip() for p in args.suite.split(",") if p.strip()]
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise BadConfig(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
        if not names:
            raise BadConfig("--suite must name at least one suite")
    opts = _suite_opts(args)

    records: list[dict] = []
    worst = None  # (slack, checker, trial, instance, tolerance)
    all_pass = True
    for name in names:
        triples = run_suite(name, dims, args.trials, seed, args.eps, args.tol, opts)
        min_slack = min(result.slack for _, _, result in triples)
        ok = all(result.passed for _, _, result in triples)
        all_pass = all_pass and ok
        for trial, instance, result in triples:
            records.append(as_record(result, dims, seed, trial))
            if not result.passed and (worst is None or result.slack < worst[0]):
                worst = (result.slack, name, trial, instance, result.tolerance)
        _say(f"[{name}] trials={args.trials} min_slack={min_slack:.6e} "
             f"{'PASS' if ok else 'FAIL'}")
    _write_report(records, args.format, args.out)
    if not all_pass and worst is not None:
        path = _worst_dump_path(args.out)
        _dump_instance(path, worst[1], dims, seed, worst[2], worst[4], worst[3], opts)
        _say(f"worst failing instance written to {path}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_markov(args) -> int:
    try:
        with open(args.spec) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadConfig(f"cannot read Markov spec {args.spec!r}: {exc}") from exc
    spec = markov_spec_from_json(obj)
    state = markov_state(spec)
    t_samples = (
        _parse_floats(args.t_samples, "--t-samples")
        if args.t_samples
        else checks.DEFAULT_T_SAMPLES
    )
    result = checks.markov_characterizations(state, t_samples=t_samples)
    print(f"dims = {state.dims} (blocks: {len(spec.weights)})")
    for key in ("cmi", "r_log", "r_petz", "r_recon_ab", "r_recon_bc"):
        print(f"{key:>12} = {result.quantities[key]:.3e}")
    print(f"markov_like = {result.meta['markov_like']}")
    print(f"consistent  = {result.extra_ok}")
    if args.out:
        _write_report(
            [as_record(result, state.dims, 0, 0)], args.format, args.out
        )
    return EXIT_OK if result.passed else EXIT_FAILED


def cmd_trotter(args) -> int:
    seed = _effective_seed(args.seed)
    n_values = _trotter_n_values(args.nmax)
    if args.state:
        try:
            with open(args.state) as fh:
                loaded = state_from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise BadConfig(f"cannot read state {args.state!r}: {exc}") from exc
        if getattr(loaded, "n_parts", 1) != 3:
            raise BadConfig("trotter needs a tripartite state file")
        runs = [(0, loaded)]
        dims = loaded.dims
    else:
        dims = _parse_dims(args.dims)
        suite = SUITES["trotter-bound"]
        runs = []
        from .suites import trial_rng

        for trial in range(args.trials):
            rng = trial_rng(seed, "trotter-bound", trial)
            runs.append((trial, suite.sample(rng, dims, args.eps)["rho"]))
    records = []
    flagged = False
    for trial, state in runs:
        result = checks.trotter_sequence(state, n_values=n_values, tol=args.tol)
        records.append(as_record(result, dims, seed, trial))
        _say(f"trial {trial}: trace_surrogate="
             f"{result.quantities['trace_surrogate']:.12f}")
        for n, t_n, gap in result.meta["table"]:
            _say(f"  n={n:>3}  t_n={t_n:.12f}  t_n-TrS={gap:+.3e}")
        if not result.passed:
            flagged = True
            _say(f"trial {trial}: FLAGGED (bound or convergence violated)")
    if args.out:
        _write_report(records, args.format, args.out)
    return EXIT_FAILED if flagged else EXIT_OK


def cmd_explore(args) -> int:
    dims = _parse_dims(args.dims)
    seed = _effective_seed(args.seed)
    report = checks.explore_conjecture(
        args.kind, args.trials, dims, seed, args.eps, args.tol
    )
    payload = json.dumps(report.to_json(), sort_keys=True, separators=(",", ":"))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        sys.stdout.write(payload + "\n")
    _say(f"[{report.kind}] trials={report.trials} min_slack={report.min_slack:.6e} "
         f"worst_trial={report.worst_trial}")
    if report.candidate_counterexample:
        _say("candidate counterexample flagged; inspect the worst instance dump")
        return EXIT_CANDIDATE
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        with open(args.dump) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadConfig(f"cannot read dump {args.dump!r}: {exc}") from exc
    tol = payload.get("tolerance", args.tol)
    kind = payload.get("explore_kind", payload.get("kind"))
    if kind is not None and "checker" not in payload:
        # exploration report or explicit exploration dump
        if kind not in checks.EXPLORE_KINDS:
            raise BadConfig(f"unknown exploration kind {kind!r}")
        blob = payload.get("instance", payload.get("worst_instance"))
        if blob is None:
            raise BadConfig("dump carries no instance to replay")
        instance = deserialize_instance(blob)
        slack, quantities = checks.EXPLORE_KINDS[kind][1](instance)
        print(f"kind = {kind}")
        for key, value in sorted(quantities.items()):
            print(f"{key} = {value:.12e}")
        print(f"slack = {slack:.12e}")
        return EXIT_CANDIDATE if slack < -10.0 * tol else EXIT_OK
    checker = payload.get("checker")
    if checker not in SUITES:
        raise BadConfig(f"dump names unknown checker {checker!r}")
    try:
        instance = deserialize_instance(payload["instance"])
    except KeyError as exc:
        raise BadConfig(f"dump is missing field {exc}") from exc
    result = SUITES[checker].run(instance, tol, payload.get("opts", {}))
    record = as_record(
        result,
        payload.get("dims", []),
        payload.get("seed", 0),
        payload.get("trial", 0),
    )
    sys.stdout.write(records_to_json([record]))
    _say(f"[{checker}] slack={result.slack:.6e} "
         f"{'PASS' if result.passed else 'FAIL'}")
    return EXIT_OK if result.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, trials_default: int = 1000) -> None:
    parser.add_argument("--dims", default="2,2,2", help="subsystem dims, e.g. 2,2,2")
    parser.add_argument("--trials", type=int, default=trials_default)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=TOL_INEQ,
                        help="absolute slack tolerance")
    parser.add_argument("--eps", type=float, default=DEFAULT_EPS,
                        help="full-rank regularization weight")
    parser.add_argument("--out", default=None, help="report path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qelab",
        description="numerical laboratory for entropy inequalities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run checker suites")
    p_check.add_argument("--suite", default="all",
                         help="comma-separated suite names or 'all'")
    _add_common(p_check)
    p_check.add_argument("--alpha", default=None,
                         help="comma-separated alpha grid override")
    p_check.add_argument("--t-samples", dest="t_samples", default=None,
                         help="comma-separated t grid for the Petz signature")
    p_check.add_argument("--nmax", type=int, default=None,
                         help="largest compression order (powers of two)")
    p_check.set_defaults(func=cmd_check)

    p_markov = sub.add_parser("markov", help="build and examine a Markov spec")
    p_markov.add_argument("spec", help="MarkovSpec JSON file")
    p_markov.add_argument("--t-samples", dest="t_samples", default=None)
    p_markov.add_argument("--out", default=None)
    p_markov.add_argument("--format", choices=("json", "csv"), default="json")
    p_markov.set_defaults(func=cmd_markov)

    p_trotter = sub.add_parser("trotter", help="compressed-product trace study")
    p_trotter.add_argument("state", nargs="?", default=None,
                           help="optional tripartite state JSON file")
    _add_common(p_trotter, trials_default=10)
    p_trotter.add_argument("--nmax", type=int, default=64)
    p_trotter.set_defaults(func=cmd_trotter)

    p_explore = sub.add_parser("explore", help="sweep an open inequality")
    p_explore.add_argument("kind", help="one of: " + ", ".join(checks.EXPLORE_KINDS))
    _add_common(p_explore)
    p_explore.set_defaults(func=cmd_explore)

    p_replay = sub.add_parser("replay", help="rerun a dumped instance")
    p_replay.add_argument("dump", help="instance dump JSON file")
    p_replay.add_argument("--tol", type=float, default=TOL_INEQ)
    p_replay.set_defaults(func=cmd_replay)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BadConfig as exc:
        _say(f"config error: {exc}")
        return EXIT_CONFIG
    except QelabError as exc:
        _say(f"error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
