"""Command-line front end.

stdout carries JSON only; progress and summaries go to stderr. Exit codes:
0 success or theorem holds, 1 theorem violated, 2 usage, format or
certification error.
"""

import argparse
import csv
import json
import sys
import time

from .errors import MubkitError
from .mub import build_full_mub_set, load_bases, save_bases
from .rng import RandomStream
from .states import (
    BipartiteState,
    classical_correlated,
    load_state,
    maximally_entangled,
    product_state,
    random_bipartite,
    random_density,
    save_state,
)
from .theorems import (
    CHECKS,
    SweepConfig,
    check_eq1,
    check_t1_equality,
    check_t1_inequality,
    check_t2_conservation,
    default_seed,
    replay_trial,
    run_sweep,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class UsageError(MubkitError):
    pass


def _emit(obj):
    print(json.dumps(obj, indent=1))


def _log(msg):
    print(msg, file=sys.stderr)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _tol_pair(text):
    check, _, value = text.partition("=")
    if check not in CHECKS or not value:
        raise argparse.ArgumentTypeError(f"expected CHECK=VALUE with CHECK in {CHECKS}, got {text!r}")
    return check, float(value)


def cmd_mub_gen(args):
    ms = build_full_mub_set(args.d)
    if args.out:
        save_bases(ms, args.out)
        load_bases(args.out)
    _emit({"d": ms.d, "bases": len(ms), "labels": ms.labels, "out": args.out})
    return EXIT_OK


def cmd_state_gen(args):
    rng = RandomStream(args.seed)
    d = args.d
    if args.kind == "bell":
        s = maximally_entangled(d)
    elif args.kind == "classical":
        s = classical_correlated(d)
    elif args.kind == "random":
        s = random_bipartite(d, args.rank if args.rank is not None else d * d, rng)
    else:
        rank = args.rank if args.rank is not None else d
        s = product_state(random_density(d, rank, rng), random_density(d, rank, rng))
    save_state(s, args.out)
    _emit({"kind": args.kind, "d": d, "out": args.out})
    return EXIT_OK


def cmd_verify(args):
    s = load_state(args.state)
    if not isinstance(s, BipartiteState):
        raise UsageError(f"{args.state}: verification needs a bipartite state")
    ms = load_bases(args.bases)
    if ms.d != s.d:
        raise UsageError(f"dimension mismatch: state d={s.d}, bases d={ms.d}")
    kw = {} if args.tol is None else {"tol": args.tol}
    if args.check == "t1":
        result = check_t1_equality(s, ms, dense=args.dense, **kw)
    elif args.check == "t2":
        result = check_t2_conservation(s, ms, dense=args.dense, **kw)
    elif args.check == "t1-ineq":
        idx = args.subset if args.subset is not None else list(range(len(ms)))
        result = check_t1_inequality(s, [_basis(ms, i) for i in idx], **kw)
    else:
        result = check_eq1(s, _basis(ms, args.theta), _basis(ms, args.tau), **kw)
    _emit(result.to_dict())
    _log(f"{result.kind}: residual {result.residual:.3e} (tol {result.tol:.1e}) -> {'pass' if result.passed else 'FAIL'}")
    return EXIT_OK if result.passed else EXIT_VIOLATION


def _basis(ms, i):
    if not 0 <= i < len(ms):
        raise UsageError(f"basis index {i} out of range [0, {len(ms)})")
    return ms[i]


def cmd_sweep(args):
    config = SweepConfig(
        dims=args.d,
        trials=args.trials,
        ranks=args.ranks,
        seed=args.seed,
        checks=args.checks,
        tol=dict(args.tol or []),
        out=args.out,
        csv=args.csv,
        jobs=args.jobs,
    )
    start = time.perf_counter()
    report = run_sweep(config)
    elapsed = time.perf_counter() - start
    payload = report.to_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
    if args.csv:
        _write_csv(report.records, args.csv)
    _emit(payload)
    for entry in report.per_dim:
        if "error" in entry:
            _log(f"d={entry['d']}: {entry['error']}")
            continue
        parts = []
        for name, summary in entry["checks"].items():
            stat = summary.get("max_abs_residual", summary.get("min_slack"))
            parts.append(f"{name} {stat:.2e} ({summary['failures']} fail)")
        _log(f"d={entry['d']} trials={entry['trials']}: " + ", ".join(parts))
    _log(f"{report.trials} trials in {elapsed:.1f} s -> {'pass' if report.passed else 'FAIL'}")
    if any("error" in e for e in report.per_dim):
        return EXIT_INPUT
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _write_csv(records, path):
    fields = sorted({k for r in records for k in r}, key=lambda k: (k not in ("d", "rank", "trial", "seed"), k))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(records)


def cmd_replay(args):
    record = replay_trial(args.d, args.rank, args.seed, args.checks)
    _emit(record)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="mubkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    mub = sub.add_parser("mub", help="mutually unbiased bases").add_subparsers(dest="action", required=True)
    gen = mub.add_parser("gen", help="write a certified complete MUB set")
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_mub_gen)

    state = sub.add_parser("state", help="density matrices").add_subparsers(dest="action", required=True)
    sgen = state.add_parser("gen", help="write a bipartite state file")
    sgen.add_argument("--kind", choices=["bell", "classical", "random", "product-random"], required=True)
    sgen.add_argument("--d", type=int, required=True)
    sgen.add_argument("--rank", type=int)
    sgen.add_argument("--seed", type=int, default=None)
    sgen.add_argument("--out", required=True)
    sgen.set_defaults(func=cmd_state_gen)

    ver = sub.add_parser("verify", help="check one relation on one state")
    ver.add_argument("check", choices=CHECKS)
    ver.add_argument("--state", required=True)
    ver.add_argument("--bases", required=True)
    ver.add_argument("--tol", type=float)
    ver.add_argument("--theta", type=int, default=0)
    ver.add_argument("--tau", type=int, default=1)
    ver.add_argument("--subset", type=_int_list)
    ver.add_argument("--dense", action="store_true", help="build post-measurement states explicitly")
    ver.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="randomised ensemble verification")
    sw.add_argument("--d", type=_int_list, default=[2, 3])
    sw.add_argument("--trials", type=int, default=1000)
    sw.add_argument("--ranks", type=_str_list, default=["1", "half", "full"])
    sw.add_argument("--seed", type=int, default=None)
    sw.add_argument("--checks", type=_str_list, default=["t1", "t2"])
    sw.add_argument("--tol", type=_tol_pair, action="append", metavar="CHECK=VALUE")
    sw.add_argument("--out")
    sw.add_argument("--csv")
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)

    rp = sub.add_parser("replay", help="recompute one sweep trial from its seed")
    rp.add_argument("--d", type=int, required=True)
    rp.add_argument("--rank", type=int, required=True)
    rp.add_argument("--seed", type=int, required=True)
    rp.add_argument("--checks", type=_str_list, default=list(CHECKS))
    rp.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = default_seed()
    try:
        return args.func(args)
    except (MubkitError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
