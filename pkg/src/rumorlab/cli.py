"""rumorlab command line.

Exit codes: 0 success, 1 a check failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

from .analysis import (
    FAILURE_GENERATORS,
    ChernoffVariant,
    MCProtocol,
    chernoff_bounds,
    derand_params,
    exhaustive_oracle,
    failure_set,
    geometric_sum_bound,
    montecarlo_tail,
    rgp_runtime_bound,
    safety_estimate,
    wu_runtime_bound,
)
from .exectree import NONTERMINATING, Kind, export_tree, hgp, hwu, pattern_stream
from .seqcore import Tail, derive_seed
from .simulator import (
    AppendixMode,
    FailureModel,
    PermTable,
    default_round_cap,
    simulate_gp,
    simulate_rgp,
    simulate_tablegp,
    simulate_wu,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_failure_set(inline: Optional[str], path: Optional[str], n: int) -> List[int]:
    ids: List[int] = []
    try:
        if inline:
            ids += [int(x) for x in inline.split(",") if x.strip()]
        if path:
            ids += [int(line) for line in Path(path).read_text().split() if line.strip()]
    except (ValueError, OSError) as exc:
        raise ConfigError(f"unreadable failure set: {exc}") from exc
    bad = [x for x in ids if not 1 <= x <= n - 1]
    if bad:
        raise ConfigError(f"failure set must lie in [1..{n - 1}] (processor 0 never fails): {bad}")
    if len(set(ids)) != len(ids):
        raise ConfigError("failure set lists a processor twice")
    return sorted(ids)


def _emit(args, text: str) -> None:
    if args.out:
        write_atomic(args.out, text)


# --------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    n = args.n
    if n < 1:
        raise ConfigError("--n must be at least 1")
    failed = parse_failure_set(args.fail_set, args.fail_file, n)
    proto = args.protocol
    if proto == "gp":
        if args.p is not None and failed:
            raise ConfigError("give either --p or a failure set, not both")
        fm = FailureModel.random(args.p, args.seed) if args.p is not None else FailureModel.adversarial(failed)
        trace = simulate_gp(n, fm)
    elif proto == "wu":
        if failed:
            raise ConfigError("the wakeup model takes --p, not a failure set")
        trace = simulate_wu(n, FailureModel.random(1.0 if args.p is None else args.p, args.seed), args.cap)
    elif proto == "rgp":
        trace = simulate_rgp(n, failed, args.seed, AppendixMode(args.mode))
    else:
        if args.t is None:
            raise ConfigError("tablegp needs --t")
        table_seed = args.table_seed if args.table_seed is not None else derive_seed(args.seed, 0)
        table = PermTable.random(n, args.t, table_seed)
        trace = simulate_tablegp(n, table, failed, args.seed)
    _emit(args, trace.dumps())
    print(trace.summary())
    return EXIT_OK


def cmd_tree(args) -> int:
    tail = Tail(args.tail)
    stream = pattern_stream(args.pattern, tail, args.p, args.seed)
    cap = args.cap if args.cap is not None else default_round_cap()
    kind = Kind(args.kind)
    h = hgp(args.k, stream) if kind is Kind.GP else hwu(args.k, stream, cap)
    if h is NONTERMINATING:
        if args.out:
            raise ConfigError("cannot export a nonterminating tree; raise --cap or change the pattern")
        print("NONTERMINATING")
        return EXIT_OK
    if args.out:
        write_atomic(args.out, export_tree(args.k, stream, kind, cap))
    print(f"height={h}")
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    if args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    proto = MCProtocol(args.protocol)
    failed = parse_failure_set(args.fail_set, args.fail_file, args.n)
    table = None
    if proto in (MCProtocol.RGP, MCProtocol.TABLEGP) and not failed and args.f:
        failed = list(failure_set(args.n, args.f, args.fail_gen, args.seed))
    if proto is MCProtocol.TABLEGP:
        if args.t is None:
            raise ConfigError("tablegp needs --t")
        table_seed = args.table_seed if args.table_seed is not None else derive_seed(args.seed, 0)
        table = PermTable.random(args.n, args.t, table_seed)
    report = montecarlo_tail(
        proto, args.n, args.c, args.trials, args.seed, p=args.p, failed=failed, table=table, round_cap=args.cap
    )
    _emit(args, report.dumps())
    if args.csv:
        write_atomic(args.csv, report.histogram_csv())
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_oracle(args) -> int:
    report = exhaustive_oracle(args.n_max)
    for line in report.lines():
        print(line)
    _emit(args, json.dumps(report.to_json(), indent=1) + "\n")
    print(f"verdict={'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_safety(args) -> int:
    n, t, f = args.n, args.t, args.f
    params = derand_params(n, t)
    table_seed = args.table_seed if args.table_seed is not None else derive_seed(args.seed, 0)
    table = PermTable.random(n, t, table_seed)
    T = args.T if args.T is not None else rgp_runtime_bound(n, f, args.c or params.c).T
    report = safety_estimate(n, table, f, T, args.samples, args.seed, params.delta)
    _emit(args, report.dumps())
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_bounds(args) -> int:
    n, c = args.n, args.c
    out = {"n": n, "c": c}
    out["wu_runtime_bound"] = wu_runtime_bound(n, args.p, c).to_json() | {"p": args.p}
    if args.f is not None:
        out["rgp_runtime_bound"] = rgp_runtime_bound(n, args.f, c).to_json() | {"f": args.f}
    if args.t is not None:
        out["derand_params"] = derand_params(n, args.t).to_json() | {"t": args.t}
    out["geometric_sum_bound"] = {"n_vars": n, "delta": c - 1, "value": geometric_sum_bound(n, c - 1)}
    out["chernoff_additive"] = {
        "n_vars": n,
        "t": args.chernoff_t,
        "value": chernoff_bounds(0.0, n, args.chernoff_t, ChernoffVariant.ADDITIVE),
    }
    text = json.dumps(out, indent=1) + "\n"
    _emit(args, text)
    sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="artifact path (written atomically)")
    common.add_argument("--format", choices=["json", "csv", "dot"], help="artifact format (fixed per subcommand)")

    parser = argparse.ArgumentParser(prog="rumorlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="run one protocol execution")
    sim.add_argument("--protocol", choices=["gp", "wu", "rgp", "tablegp"], default="gp")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--fail-set", help="comma-separated crashed processors")
    sim.add_argument("--fail-file", help="file with one crashed processor id per line")
    sim.add_argument("--p", type=float, help="success rate (gp: random crashes, wu: per request)")
    sim.add_argument("--t", type=int, help="permutation table size (tablegp)")
    sim.add_argument("--table-seed", type=int)
    sim.add_argument("--mode", choices=[m.value for m in AppendixMode], default="threshold")
    sim.add_argument("--cap", type=int, help="round cap for wu")
    sim.set_defaults(func=cmd_simulate, fmt="json")

    tree = sub.add_parser("tree", parents=[common], help="execution-tree height, optional DOT export")
    tree.add_argument("--kind", choices=["gp", "wu"], default="gp")
    tree.add_argument("--k", type=int, required=True)
    tree.add_argument("--pattern", default="")
    tree.add_argument("--tail", choices=[t.value for t in Tail], default="ones")
    tree.add_argument("--p", type=float, help="success rate of a bernoulli tail")
    tree.add_argument("--cap", type=int)
    tree.set_defaults(func=cmd_tree, fmt="dot")

    mc = sub.add_parser("montecarlo", parents=[common], help="runtime tail vs. the matching bound")
    mc.add_argument("--protocol", choices=[p.value for p in MCProtocol], default="wu")
    mc.add_argument("--n", type=int, required=True)
    mc.add_argument("--p", type=float, default=1.0)
    mc.add_argument("--f", type=int, default=0)
    mc.add_argument("--fail-gen", choices=FAILURE_GENERATORS, default="prefix")
    mc.add_argument("--fail-set")
    mc.add_argument("--fail-file")
    mc.add_argument("--c", type=float, default=3.5)
    mc.add_argument("--trials", type=int, default=10_000)
    mc.add_argument("--t", type=int)
    mc.add_argument("--table-seed", type=int)
    mc.add_argument("--cap", type=int)
    mc.add_argument("--csv", help="histogram CSV path (rounds,count)")
    mc.set_defaults(func=cmd_montecarlo, fmt="json")

    orc = sub.add_parser("oracle", parents=[common], help="exhaustive small-instance checks")
    orc.add_argument("--n-max", type=int, required=True)
    orc.set_defaults(func=cmd_oracle, fmt="json")

    saf = sub.add_parser("safety", parents=[common], help="sampled table safety estimate")
    saf.add_argument("--n", type=int, required=True)
    saf.add_argument("--t", type=int, required=True)
    saf.add_argument("--f", type=int, required=True)
    saf.add_argument("--samples", type=int, default=200)
    saf.add_argument("--table-seed", type=int)
    saf.add_argument("--c", type=float, help="defaults to the solved constant for (n, t)")
    saf.add_argument("--T", type=float, help="round bound override")
    saf.set_defaults(func=cmd_safety, fmt="json")

    bnd = sub.add_parser("bounds", parents=[common], help="evaluate the closed-form bounds")
    bnd.add_argument("--n", type=int, required=True)
    bnd.add_argument("--p", type=float, default=0.5)
    bnd.add_argument("--c", type=float, default=3.5)
    bnd.add_argument("--f", type=int)
    bnd.add_argument("--t", type=int)
    bnd.add_argument("--chernoff-t", type=float, default=0.0)
    bnd.set_defaults(func=cmd_bounds, fmt="json")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.format and args.format != args.fmt and not (args.command == "montecarlo" and args.format == "csv"):
        print(f"error: {args.command} writes {args.fmt}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "montecarlo" and args.format == "csv":
        args.csv, args.out = args.out, None
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
