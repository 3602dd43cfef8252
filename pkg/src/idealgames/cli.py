"""Command-line front end.

Exit codes: 0 success, 1 error, 2 soft failure (Undecided-dominated
results).  Stochastic commands require --seed.  The environment variable
IDEALGAMES_HORIZON_CAP bounds every horizon argument as a memory guard.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import __version__
from . import convergence as cv
from . import dsl
from . import games as gm
from . import ideals as il
from . import mc
from . import replay
from . import seqspace as sq
from . import series as se
from .errors import IdealGamesError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDECIDED = 2

DEFAULT_HORIZON_CAP = 2_000_000


def _horizon_cap() -> int:
    raw = os.environ.get("IDEALGAMES_HORIZON_CAP")
    return int(raw) if raw else DEFAULT_HORIZON_CAP


def _check_horizon(n: int) -> int:
    cap = _horizon_cap()
    if n > cap:
        raise IdealGamesError(
            f"horizon {n} exceeds IDEALGAMES_HORIZON_CAP={cap}"
        )
    return n


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _pointset_payload(ps: cv.PointSet) -> dict:
    return {
        "points": list(ps.points),
        "flags": list(ps.flags),
        "undecided": list(ps.undecided),
    }


def _cmd_classify(args) -> int:
    ideal = il.Ideal.from_name(args.ideal)
    expr = dsl.parse_set(args.set)
    if args.mode == "symbolic":
        verdict = il.classify_symbolic(ideal, expr)
    elif args.mode == "horizon":
        verdict = il.classify_horizon(ideal, expr, _check_horizon(args.horizon))
    else:
        verdict = il.classify(ideal, expr, _check_horizon(args.horizon))
    _emit({"set": expr.to_dsl(), "ideal": ideal.kind, "verdict": verdict.as_dict()},
          args.out)
    return EXIT_OK if verdict.decided else EXIT_UNDECIDED


def _cmd_cluster(args) -> int:
    x = dsl.parse_seq(args.seq)
    ideal = il.Ideal.from_name(args.ideal)
    ps = cv.cluster_points(x, ideal, _check_horizon(args.horizon), args.eps)
    _emit({"seq": x.label(), "ideal": ideal.kind, **_pointset_payload(ps)}, args.out)
    return EXIT_UNDECIDED if cv.UNDECIDED_FLAG in ps.flags else EXIT_OK


def _cmd_limit(args) -> int:
    x = dsl.parse_seq(args.seq)
    ideal = il.Ideal.from_name(args.ideal)
    ladder = cv.default_ladder(args.eps, _check_horizon(args.horizon), args.depth)
    ps = cv.limit_points(x, ideal, args.horizon, ladder)
    _emit({"seq": x.label(), "ideal": ideal.kind, **_pointset_payload(ps)}, args.out)
    return EXIT_UNDECIDED if cv.UNDECIDED_FLAG in ps.flags else EXIT_OK


def _cmd_preserve(args) -> int:
    x = dsl.parse_seq(args.seq)
    ideal = il.Ideal.from_name(args.ideal)
    t = dsl.parse_transform(args.transform)
    outcome = cv.preserve_outcome(
        args.kind, x, t, ideal, _check_horizon(args.horizon), args.eps
    )
    _emit(
        {
            "seq": x.label(),
            "ideal": ideal.kind,
            "kind": args.kind,
            "transform": t.label(),
            "preserved": outcome.matched,
            "decided": outcome.decided,
            "base": _pointset_payload(outcome.base),
            "transformed": _pointset_payload(outcome.transformed),
        },
        args.out,
    )
    return EXIT_OK if outcome.decided else EXIT_UNDECIDED


def _cmd_game(args) -> int:
    if replay.player_i_is_stochastic(args.strat_i) and args.seed is None:
        raise IdealGamesError("--seed is mandatory with a randomized strategy")
    strat_i = args.strat_i
    if args.strat_i == "randjump" and args.seed is not None:
        strat_i = f"randjump:{args.seed}"
    config = {
        "command": "game",
        "ideal": args.ideal,
        "strat_i": strat_i,
        "strat_ii": args.strat_ii,
        "rounds": args.rounds,
    }
    transcript = replay.run_config(config)
    if args.out:
        transcript.write(args.out)
    else:
        sys.stdout.write(transcript.to_jsonl())
    return EXIT_OK if transcript.verdict.decided else EXIT_UNDECIDED


def _cmd_generic(args) -> int:
    stochastic = args.oracles.startswith("random") or replay.player_i_is_stochastic(
        args.strat_i
    )
    if stochastic and args.seed is None:
        raise IdealGamesError("--seed is mandatory with randomized components")
    oracles = args.oracles
    if oracles == "random" and args.seed is not None:
        oracles = f"random:{args.seed}"
    config = {
        "command": "generic",
        "mode": args.mode,
        "seq": args.seq,
        "ideal": args.ideal,
        "rounds": args.rounds,
    }
    if args.mode == "sigma-witness":
        config["etas"] = [str(Fraction(e)) for e in args.etas.split(";")]
        config["m_max"] = args.m_max
    else:
        config["ball"] = {"center": args.ball_center, "radius": args.ball_radius}
        config["strat_i"] = args.strat_i
        config["oracles"] = oracles
    transcript = replay.run_config(config)
    if args.out:
        transcript.write(args.out)
    else:
        sys.stdout.write(transcript.to_jsonl())
    return EXIT_OK if transcript.verdict.decided else EXIT_UNDECIDED


def _cmd_series(args) -> int:
    if args.sigma:
        x = dsl.parse_seq(args.seq)
        ideal = il.Ideal.from_name(args.ideal)
        if args.sigma.startswith("stem@"):
            with open(args.sigma[5:]) as fh:
                stem = tuple(json.load(fh))
            sigma = dsl.parse_transform(
                "stem[%s]" % ",".join(str(v) for v in stem)
            )
        else:
            sigma = dsl.parse_transform(args.sigma)
        if not isinstance(sigma, sq.Subseq):
            raise IdealGamesError("series takes a subsequence, not a permutation")
        verdict = se.subseq_sums_bounded(
            sigma, x, ideal, _check_horizon(args.horizon), args.k_max
        )
        _emit(
            {
                "seq": x.label(),
                "ideal": ideal.kind,
                "sigma": sigma.label(),
                "horizon": args.horizon,
                "verdict": verdict.as_dict(),
            },
            args.out,
        )
        return EXIT_OK if verdict.decided else EXIT_UNDECIDED
    config = {
        "command": "series",
        "seq": args.seq,
        "rounds": args.rounds,
        "c_step": args.c_step,
        "oracles": args.oracles,
    }
    transcript = replay.run_config(config)
    if args.out:
        transcript.write(args.out)
    else:
        sys.stdout.write(transcript.to_jsonl())
    return EXIT_OK


def _cmd_mc(args) -> int:
    report, batches = mc.estimate_preservation(
        dsl.parse_seq(args.seq),
        il.Ideal.from_name(args.ideal),
        args.kind,
        args.samples,
        _check_horizon(args.horizon),
        args.eps,
        args.seed,
        batch_size=args.batch_size,
    )
    _emit(report.as_dict(), args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["batch_end", "samples", "hits", "misses", "undecided", "seed"]
            )
            for b in batches:
                writer.writerow(
                    [b.config["batch_end"], b.samples, b.hits, b.misses,
                     b.undecided, b.seed]
                )
    undecided_heavy = report.undecided > 0.25 * report.samples
    return EXIT_UNDECIDED if undecided_heavy else EXIT_OK


def _cmd_witness(args) -> int:
    ideal = il.Ideal.from_name(args.ideal)
    report = il.witness_soundness_report(
        ideal,
        trials=args.trials,
        seed=args.seed,
        horizon=_check_horizon(args.horizon),
    )
    witness = il.talagrand_witness(ideal)
    payload = report.as_dict()
    payload["iota_prefix"] = [witness.iota(n) for n in range(1, 9)]
    _emit(payload, args.out)
    return EXIT_OK if report.fraction == 1.0 else EXIT_ERROR


def _cmd_verify(args) -> int:
    transcript = gm.Transcript.read(args.transcript)
    problems = replay.verify_transcript(transcript)
    _emit(
        {"transcript": args.transcript, "problems": problems, "ok": not problems},
        args.out,
    )
    return EXIT_OK if not problems else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="idealgames",
        description="Ideals on N, interval witnesses, the Laflamme game, "
        "and subsequence statistics.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, horizon_default=10_000):
        sp.add_argument("-N", "--horizon", type=int, default=horizon_default)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("classify", help="ideal membership of a set expression")
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--set", required=True)
    sp.add_argument("--mode", choices=["auto", "symbolic", "horizon"], default="auto")
    add_common(sp)
    sp.set_defaults(fn=_cmd_classify)

    sp = sub.add_parser("cluster", help="finite-horizon ideal cluster points")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--eps", type=float, default=0.05)
    add_common(sp)
    sp.set_defaults(fn=_cmd_cluster)

    sp = sub.add_parser("limit", help="finite-horizon ideal limit points")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--eps", type=float, default=0.05)
    sp.add_argument("--depth", type=int, default=6)
    add_common(sp)
    sp.set_defaults(fn=_cmd_limit)

    sp = sub.add_parser("preserve", help="does a transform keep the point set")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--kind", choices=["cluster", "limit", "gamma", "lambda"],
                    default="cluster")
    sp.add_argument("--transform", required=True,
                    help="stem[...], set(S), or perm-stem[...]")
    sp.add_argument("--eps", type=float, default=0.05)
    add_common(sp)
    sp.set_defaults(fn=_cmd_preserve)

    sp = sub.add_parser("game", help="play the finite-union game")
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--strat-i", default="linear:100",
                    help="linear:STEP | exp:BASE:SCALE | randjump[:SEED[:JUMP]]")
    sp.add_argument("--strat-ii", default="talagrand", choices=["talagrand", "empty"])
    sp.add_argument("--rounds", type=int, default=50)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_game)

    sp = sub.add_parser("generic", help="build a generic subsequence/permutation")
    sp.add_argument("--mode", required=True,
                    choices=["sigma-witness", "sigma-game", "pi-game"])
    sp.add_argument("--seq", required=True)
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--rounds", type=int, default=12)
    sp.add_argument("--etas", default="0;1", help="semicolon-separated targets")
    sp.add_argument("--m-max", type=int, default=3)
    sp.add_argument("--ball-center", default="0")
    sp.add_argument("--ball-radius", default="1/2")
    sp.add_argument("--strat-i", default="linear:10")
    sp.add_argument("--oracles", default="trivial",
                    help="trivial | random[:SEED] | interval-hit | forcing[:EVERY]")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_generic)

    sp = sub.add_parser("series", help="steer partial sums / test boundedness")
    sp.add_argument("--seq", default="ratenum-signed")
    sp.add_argument("--ideal", default="density0", choices=il.KINDS)
    sp.add_argument("--sigma", default=None,
                    help="stem[...], set(S), or stem@FILE (JSON list)")
    sp.add_argument("--k-max", type=int, default=se.DEFAULT_K_MAX)
    sp.add_argument("--rounds", type=int, default=10)
    sp.add_argument("--c-step", type=int, default=20)
    sp.add_argument("--oracles", default="none")
    add_common(sp)
    sp.set_defaults(fn=_cmd_series)

    sp = sub.add_parser("mc", help="Monte Carlo preservation fraction")
    sp.add_argument("--seq", required=True)
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--kind", choices=["cluster", "limit", "gamma", "lambda"],
                    default="cluster")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--eps", type=float, default=0.05)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--batch-size", type=int, default=None)
    sp.add_argument("--csv", default=None)
    add_common(sp)
    sp.set_defaults(fn=_cmd_mc)

    sp = sub.add_parser("witness", help="Talagrand witness soundness report")
    sp.add_argument("--ideal", required=True, choices=il.KINDS)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)
    add_common(sp, horizon_default=100_000)
    sp.set_defaults(fn=_cmd_witness)

    sp = sub.add_parser("verify", help="replay and validate a transcript")
    sp.add_argument("--transcript", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=_cmd_verify)

    return p


_KIND_ALIASES = {"gamma": "cluster", "lambda": "limit"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "kind"):
        args.kind = _KIND_ALIASES.get(args.kind, args.kind)
    try:
        return args.fn(args)
    except (IdealGamesError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
