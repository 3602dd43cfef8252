"""Rebuild games and constructions from their config echoes.

Every transcript carries a config dict sufficient to reproduce it
byte-for-byte; this module is the single place that interprets those
configs, shared by the CLI dispatcher and the verify round-trip.
"""
from __future__ import annotations

from fractions import Fraction

from . import dsl
from . import games as gm
from . import ideals as il
from .errors import IdealGamesError


def parse_player_i(spec: str) -> gm.PlayerI:
    parts = spec.split(":")
    if parts[0] == "linear":
        return gm.LinearPlayerI(int(parts[1]) if len(parts) > 1 else 100)
    if parts[0] == "exp":
        base = int(parts[1]) if len(parts) > 1 else 2
        scale = int(parts[2]) if len(parts) > 2 else 10
        return gm.ExponentialPlayerI(base, scale)
    if parts[0] == "randjump":
        if len(parts) < 2:
            raise IdealGamesError("randjump strategy needs a seed: randjump:SEED")
        jump = int(parts[2]) if len(parts) > 2 else 20_000
        return gm.RandomJumpPlayerI(int(parts[1]), jump)
    raise IdealGamesError(f"unknown player-I strategy {spec!r}")


def player_i_is_stochastic(spec: str) -> bool:
    return spec.startswith("randjump")


def _oracles(spec: str, rounds: int, x, ball, witness) -> list:
    parts = spec.split(":")
    if parts[0] == "trivial":
        return [gm.TrivialOracle() for _ in range(rounds)]
    if parts[0] == "random":
        if len(parts) < 2:
            raise IdealGamesError("random oracle needs a seed: random:SEED")
        seed = int(parts[1])
        return [gm.RandomExtensionOracle(seed, k) for k in range(1, rounds + 1)]
    if parts[0] == "interval-hit":
        return [gm.IntervalHitOracle(x, ball, witness) for _ in range(rounds)]
    if parts[0] == "forcing":
        every = int(parts[1]) if len(parts) > 1 else 3
        return [
            gm.ForcingOracle(x) if k % every == 0 else gm.TrivialOracle()
            for k in range(1, rounds + 1)
        ]
    raise IdealGamesError(f"unknown oracle {spec!r}")


def oracle_is_stochastic(spec: str) -> bool:
    return spec.startswith("random")


def run_config(config: dict) -> gm.Transcript:
    """Re-run a recorded game/builder config and return the fresh transcript."""
    command = config.get("command")
    rounds = int(config["rounds"])
    if command == "game":
        ideal = il.Ideal.from_name(config["ideal"])
        strat_i = parse_player_i(config["strat_i"])
        if config["strat_ii"] == "talagrand":
            strat_ii: gm.PlayerII = gm.talagrand_strategy(il.talagrand_witness(ideal))
        elif config["strat_ii"] == "empty":
            strat_ii = gm.EmptyPlayerII()
        else:
            raise IdealGamesError(f"unknown player-II strategy {config['strat_ii']!r}")
        return gm.play_laflamme(ideal, strat_i, strat_ii, rounds, config=config)
    if command == "generic":
        mode = config["mode"]
        x = dsl.parse_seq(config["seq"])
        ideal = il.Ideal.from_name(config["ideal"])
        if mode == "sigma-witness":
            etas = [Fraction(e) for e in config["etas"]]
            return gm.build_subseq_witness(
                x, ideal, etas, int(config["m_max"]), rounds, config=config
            )
        ball = gm.Ball.of(
            Fraction(config["ball"]["center"]), Fraction(config["ball"]["radius"])
        )
        strat_i = parse_player_i(config["strat_i"])
        witness = il.talagrand_witness(ideal)
        oracles = _oracles(config["oracles"], rounds, x, ball, witness)
        if mode == "sigma-game":
            return gm.build_subseq_game(
                x, ideal, ball, oracles, strat_i, rounds, config=config
            )
        if mode == "pi-game":
            return gm.build_perm_game(
                x, ideal, ball, oracles, strat_i, rounds, config=config
            )
        raise IdealGamesError(f"unknown generic mode {mode!r}")
    if command == "series":
        x = dsl.parse_seq(config["seq"])
        step = int(config["c_step"])
        oracles = None
        if config.get("oracles") and config["oracles"] != "none":
            oracles = _oracles(config["oracles"], rounds, x, None, None)
        return gm.steer_series(
            x, lambda k: step * k, rounds, oracles=oracles, config=config
        )
    raise IdealGamesError(f"config has no replayable command: {command!r}")


def verify_transcript(t: gm.Transcript) -> list[str]:
    """Replay from config and run structural checks; returns problems."""
    problems = []
    x = ball = None
    cfg = t.config
    if cfg.get("seq"):
        x = dsl.parse_seq(cfg["seq"])
    if cfg.get("ball"):
        ball = gm.Ball.of(
            Fraction(cfg["ball"]["center"]), Fraction(cfg["ball"]["radius"])
        )
    problems.extend(gm.validate_transcript(t, x, ball))
    if cfg.get("command"):
        fresh = run_config(cfg)
        if fresh.to_jsonl() != t.to_jsonl():
            problems.append("replay from config differs from recorded transcript")
    return problems
