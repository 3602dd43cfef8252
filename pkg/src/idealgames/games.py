"""Laflamme game engine and constructive generic-element builders.

Player I plays cofinite sets [c_k, oo); Player II answers with finite sets
F_k inside them; Player II wins when the union of the F_k avoids the ideal.
The builders interleave the game with cylinder refinement to produce
explicit subsequences, permutations, and steered series rearrangements.

Move sets are stored as disjoint half-open blocks [lo, hi) because interval
strategies legitimately play blocks far too wide to materialize.  All index
arithmetic is exact integers; series steering uses exact rationals, so
transcripts are stable goldens.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import ideals as il
from . import seqspace as sq
from . import setexpr as sx
from .errors import (
    ExhaustedIndices,
    InvalidMove,
    OracleViolation,
    SteeringStuck,
)

Blocks = tuple[tuple[int, int], ...]

DEFAULT_INDEX_CAP = 1_000_000


def blocks_from_values(values) -> Blocks:
    return merge_blocks([(v, v + 1) for v in values])


def merge_blocks(blocks) -> Blocks:
    out: list[tuple[int, int]] = []
    for lo, hi in sorted((lo, hi) for lo, hi in blocks if hi > lo):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


def blocks_union(a: Blocks, b: Blocks) -> Blocks:
    return merge_blocks(list(a) + list(b))


def blocks_size(blocks: Blocks) -> int:
    return sum(hi - lo for lo, hi in blocks)


def blocks_contain(blocks: Blocks, n: int) -> bool:
    return any(lo <= n < hi for lo, hi in blocks)


def blocks_to_setexpr(blocks: Blocks) -> sx.SetExpr:
    if not blocks:
        return sx.Finite(())
    expr: sx.SetExpr = sx.interval(blocks[0][0], blocks[0][1] - 1)
    for lo, hi in blocks[1:]:
        expr = sx.Union(expr, sx.interval(lo, hi - 1))
    return expr


@dataclass(frozen=True)
class Round:
    """One game round; cylinder stems appear in builder modes only."""

    k: int
    c: int | None
    F: Blocks
    A: tuple[int, ...] | None = None
    B: tuple[int, ...] | None = None
    note: dict | None = None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "c": self.c,
            "F": [list(b) for b in self.F],
            "A": {"stem": list(self.A)} if self.A is not None else None,
            "B": {"stem": list(self.B)} if self.B is not None else None,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Round":
        return cls(
            k=d["k"],
            c=d["c"],
            F=tuple((lo, hi) for lo, hi in d["F"]),
            A=tuple(d["A"]["stem"]) if d.get("A") is not None else None,
            B=tuple(d["B"]["stem"]) if d.get("B") is not None else None,
            note=d.get("note"),
        )


@dataclass(frozen=True)
class Transcript:
    """Full record of a game playout or a generic-element construction."""

    mode: str
    ideal: str | None
    rounds: tuple[Round, ...]
    union_blocks: Blocks
    verdict: il.Verdict
    stem: tuple[int, ...] | None = None
    space: str | None = None
    config: dict = field(default_factory=dict)

    def union_setexpr(self) -> sx.SetExpr:
        return blocks_to_setexpr(self.union_blocks)

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.as_dict()) for r in self.rounds]
        lines.append(
            json.dumps(
                {
                    "unionF": [list(b) for b in self.union_blocks],
                    "verdict": self.verdict.as_dict(),
                    "stem": list(self.stem) if self.stem is not None else None,
                    "space": self.space,
                    "mode": self.mode,
                    "ideal": self.ideal,
                    "config": self.config,
                }
            )
        )
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        lines = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty transcript")
        final = lines[-1]
        verdict = il.Verdict(
            il.VerdictValue(final["verdict"]["value"]),
            final["verdict"]["mode"],
            final["verdict"]["evidence"],
        )
        return cls(
            mode=final["mode"],
            ideal=final["ideal"],
            rounds=tuple(Round.from_dict(d) for d in lines[:-1]),
            union_blocks=tuple((lo, hi) for lo, hi in final["unionF"]),
            verdict=verdict,
            stem=tuple(final["stem"]) if final.get("stem") is not None else None,
            space=final.get("space"),
            config=final.get("config", {}),
        )

    @classmethod
    def read(cls, path) -> "Transcript":
        with open(path) as fh:
            return cls.from_jsonl(fh.read())


# ---------------------------------------------------------------------------
# Strategies


@dataclass(frozen=True)
class Move:
    blocks: Blocks
    note: dict | None = None


class PlayerI:
    """Cofinite-set strategy: a pure function of the transcript so far."""

    name = "player-i"

    def __call__(self, rounds: tuple[Round, ...], k: int) -> int:
        raise NotImplementedError


class LinearPlayerI(PlayerI):
    def __init__(self, step: int = 100):
        self.step = step
        self.name = f"linear:{step}"

    def __call__(self, rounds, k):
        return self.step * k


class ExponentialPlayerI(PlayerI):
    def __init__(self, base: int = 2, scale: int = 10):
        self.base = base
        self.scale = scale
        self.name = f"exp:{base}:{scale}"

    def __call__(self, rounds, k):
        return self.scale * self.base**k


class RandomJumpPlayerI(PlayerI):
    """Monotone schedule with seeded random jumps, replayable from the seed."""

    def __init__(self, seed: int, max_jump: int = 20_000):
        self.seed = seed
        self.max_jump = max_jump
        self.name = f"randjump:{seed}:{max_jump}"

    def __call__(self, rounds, k):
        prev = rounds[-1].c if rounds else 1
        # Derive the jump from seed and k so the strategy stays a pure
        # function of the transcript position.
        rng = random.Random(self.seed * 1_000_003 + k)
        return prev + rng.randint(1, self.max_jump)


class PlayerII:
    name = "player-ii"
    declares_tail = False

    def __call__(self, rounds: tuple[Round, ...], k: int, c: int) -> Move:
        raise NotImplementedError


class EmptyPlayerII(PlayerII):
    name = "empty"

    def __call__(self, rounds, k, c):
        return Move(())


class TalagrandPlayerII(PlayerII):
    """Answer each round with the next unused full witness block above c.

    Declares the tail schedule "one full block per round forever", which
    makes the final verdict symbolic: a set containing infinitely many full
    witness blocks cannot lie in the ideal.
    """

    declares_tail = True

    def __init__(self, witness: il.TalagrandWitness):
        self.witness = witness
        self.name = f"talagrand:{witness.gen.name}"

    def __call__(self, rounds, k, c):
        used = {
            r.note["block_index"]
            for r in rounds
            if r.note and "block_index" in r.note
        }
        j = self.witness.gen.first_index_at_least(max(c, 1))
        while j in used:
            j += 1
        lo, hi = self.witness.block(j)
        return Move(((lo, hi),), {"block_index": j})


class ExplicitPlayerII(PlayerII):
    """Plays a fixed list of moves; handy for tests and adversarial cases."""

    name = "explicit"

    def __init__(self, moves: list[Blocks]):
        self.moves = moves

    def __call__(self, rounds, k, c):
        return Move(self.moves[k - 1] if k <= len(self.moves) else ())


def play_laflamme(
    ideal: il.Ideal,
    strat_i: PlayerI,
    strat_ii: PlayerII,
    rounds: int,
    config: dict | None = None,
) -> Transcript:
    """Play R rounds; the verdict classifies the union of Player II's moves."""
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    played: list[Round] = []
    union: Blocks = ()
    prev_c = 0
    for k in range(1, rounds + 1):
        c = strat_i(tuple(played), k)
        if c < prev_c:
            raise InvalidMove(f"round {k}: c={c} below previous {prev_c}")
        move = strat_ii(tuple(played), k, c)
        blocks = merge_blocks(move.blocks)
        if any(lo < c for lo, _ in blocks):
            raise InvalidMove(f"round {k}: move leaves [{c}, oo)")
        played.append(Round(k, c, blocks, note=move.note))
        union = blocks_union(union, blocks)
        prev_c = c
    verdict = _game_verdict(ideal, played, union, strat_ii)
    return Transcript(
        mode="game",
        ideal=ideal.kind,
        rounds=tuple(played),
        union_blocks=union,
        verdict=verdict,
        config=config or {},
    )


def _game_verdict(
    ideal: il.Ideal, played: list[Round], union: Blocks, strat_ii: PlayerII
) -> il.Verdict:
    if not played:
        return il.Verdict(il.VerdictValue.UNDECIDED, "Symbolic", "no rounds played")
    if strat_ii.declares_tail and isinstance(strat_ii, TalagrandPlayerII):
        js = sorted(
            r.note["block_index"]
            for r in played
            if r.note and "block_index" in r.note
        )
        selector: sx.SetExpr = sx.Tail(js[-1] + 1) if js else sx.Tail(1)
        if js:
            selector = sx.Union(sx.Finite(tuple(js)), selector)
        schedule = sx.IntervalSchedule(strat_ii.witness.gen, selector)
        return il.classify_symbolic(ideal, schedule)
    return il.classify(ideal, blocks_to_setexpr(union))


def talagrand_strategy(witness: il.TalagrandWitness) -> TalagrandPlayerII:
    return TalagrandPlayerII(witness)


# ---------------------------------------------------------------------------
# Dense-open refinement oracles


class DenseOpenOracle:
    """Operational stand-in for a dense open set: refine a cylinder."""

    name = "oracle"

    def refine(self, cyl: sq.Cylinder) -> sq.Cylinder:
        raise NotImplementedError


class TrivialOracle(DenseOpenOracle):
    name = "trivial"

    def refine(self, cyl):
        return cyl


class RandomExtensionOracle(DenseOpenOracle):
    """Seeded random stem extension; each round gets its own derived seed."""

    def __init__(self, seed: int, k: int, max_steps: int = 6, max_jump: int = 9):
        self.seed = seed
        self.k = k
        self.max_steps = max_steps
        self.max_jump = max_jump
        self.name = f"random:{seed}:{k}"

    def refine(self, cyl):
        rng = random.Random(self.seed * 1_000_003 + self.k)
        stem = list(cyl.stem)
        steps = rng.randint(1, self.max_steps)
        if cyl.space is sq.Space.SIGMA:
            last = stem[-1] if stem else 0
            for _ in range(steps):
                last += rng.randint(1, self.max_jump)
                stem.append(last)
        else:
            used = set(stem)
            top = max(used, default=0)
            for _ in range(steps):
                v = rng.randint(1, top + self.max_jump)
                while v in used:
                    v += 1
                used.add(v)
                stem.append(v)
                top = max(top, v)
        return sq.Cylinder(cyl.space, tuple(stem))


class IntervalHitOracle(DenseOpenOracle):
    """Extend the stem so one more full witness block maps into a target ball.

    This is the refinement the comeager sets of the theory actually provide:
    membership in it forces the block [iota(j), iota(j+1)) of positions to
    carry terms inside the ball.
    """

    def __init__(
        self,
        x: sq.SeqDescriptor,
        ball: "Ball",
        witness: il.TalagrandWitness,
        index_cap: int = DEFAULT_INDEX_CAP,
    ):
        self.x = x
        self.ball = ball
        self.witness = witness
        self.index_cap = index_cap
        self.name = f"interval-hit:{witness.gen.name}"

    def refine(self, cyl):
        if cyl.space is not sq.Space.SIGMA:
            raise OracleViolation("interval-hit oracle refines sigma cylinders")
        stem = list(cyl.stem)
        j = 1
        while self.witness.iota(j) <= len(stem):
            j += 1
        lo, hi = self.witness.block(j)
        last = stem[-1] if stem else 0
        while len(stem) < lo - 1:
            last += 1
            stem.append(last)
        for _ in range(lo, hi):
            last = _next_index(
                lambda i: self.ball.contains(self.x.term(i)), last, self.index_cap
            )
            stem.append(last)
        return sq.Cylinder(sq.Space.SIGMA, tuple(stem))


@dataclass(frozen=True)
class Ball:
    """Closed rational ball |v - center| <= radius."""

    center: Fraction
    radius: Fraction

    def contains(self, v) -> bool:
        return abs(Fraction(v) - self.center) <= self.radius

    def as_dict(self) -> dict:
        return {"center": str(self.center), "radius": str(self.radius)}

    @classmethod
    def of(cls, center, radius) -> "Ball":
        return cls(Fraction(center), Fraction(radius))


def _next_index(pred, after: int, cap: int) -> int:
    i = after + 1
    while i <= cap:
        if pred(i):
            return i
        i += 1
    raise ExhaustedIndices(f"no admissible index in ({after}, {cap}]")


# ---------------------------------------------------------------------------
# Generic subsequence builder, witness mode


def build_subseq_witness(
    x: sq.SeqDescriptor,
    ideal: il.Ideal,
    etas: list,
    m_max: int,
    rounds: int,
    index_cap: int = DEFAULT_INDEX_CAP,
    config: dict | None = None,
) -> Transcript:
    """Map full witness blocks of positions into shrinking balls, round-robin.

    Block k of positions [iota(k), iota(k+1)) is steered entirely into the
    ball of radius 1/m around eta for the k-th (eta, m) pair of the cycle,
    so each scheduled pair owns at least rounds/len(schedule) full blocks.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    witness = il.talagrand_witness(ideal)
    pairs = [(eta, m) for m in range(1, m_max + 1) for eta in etas]
    stem: list[int] = []
    played: list[Round] = []
    union: Blocks = ()
    for k in range(1, rounds + 1):
        eta, m = pairs[(k - 1) % len(pairs)]
        lo, hi = witness.block(k)
        last = stem[-1] if stem else 0
        while len(stem) < lo - 1:  # positions below the first block
            last += 1
            stem.append(last)
        ball = Ball.of(eta, Fraction(1, m))
        for _ in range(lo, hi):
            last = _next_index(lambda i: ball.contains(x.term(i)), last, index_cap)
            stem.append(last)
        block = ((lo, hi),)
        played.append(
            Round(
                k,
                None,
                block,
                note={"eta": str(Fraction(eta)), "m": m, "block_index": k},
            )
        )
        union = blocks_union(union, block)
    if not played:
        verdict = il.Verdict(
            il.VerdictValue.UNDECIDED, "Symbolic", "no rounds played"
        )
    else:
        selector = sx.Union(
            sx.Finite(tuple(range(1, rounds + 1))), sx.Tail(rounds + 1)
        )
        schedule = sx.IntervalSchedule(witness.gen, selector)
        verdict = il.classify_symbolic(ideal, schedule)
    return Transcript(
        mode="sigma-witness",
        ideal=ideal.kind,
        rounds=tuple(played),
        union_blocks=union,
        verdict=verdict,
        stem=tuple(stem),
        space="sigma",
        config=config or {},
    )


# ---------------------------------------------------------------------------
# Generic builders, game mode


def _fill_increasing(stem, upto, in_set, last, index_cap):
    """Extend positions len(stem)+1 .. upto-1 with increasing in_set indices."""
    while len(stem) < upto - 1:
        last = _next_index(in_set, last, index_cap)
        stem.append(last)
    return last


def build_subseq_game(
    x: sq.SeqDescriptor,
    ideal: il.Ideal,
    ball: Ball,
    oracles,
    strat_i: PlayerI,
    rounds: int,
    index_cap: int = DEFAULT_INDEX_CAP,
    config: dict | None = None,
    mode: str = "sigma-game",
) -> Transcript:
    """Interleave the game with cylinder refinement.

    Every round: positions below c_k are filled with indices whose terms
    avoid the ball, the round's oracle refines the cylinder, and the move
    F_k collects the ball-hitting positions of the window [c_k, m(B_k)].
    Positions of the window beyond the refined stem are filled by later
    rounds with ball-avoiding indices, so the recorded F_k stays exactly
    the window's hit set in the final subsequence.
    """
    in_e = lambda i: not ball.contains(x.term(i))
    stem: list[int] = []
    played: list[Round] = []
    union: Blocks = ()
    prev_c = 0
    for k in range(1, rounds + 1):
        c = strat_i(tuple(played), k)
        if c < prev_c:
            raise InvalidMove(f"round {k}: c={c} below previous {prev_c}")
        last = stem[-1] if stem else 0
        last = _fill_increasing(stem, c, in_e, last, index_cap)
        a_cyl = sq.Cylinder(sq.Space.SIGMA, tuple(stem))
        b_cyl = oracles[k - 1].refine(a_cyl)
        if b_cyl.space is not sq.Space.SIGMA or not b_cyl.extends(a_cyl):
            raise OracleViolation(f"round {k}: refinement is not a sub-cylinder")
        stem = list(b_cyl.stem)
        hits = [
            n
            for n in range(c, len(stem) + 1)
            if ball.contains(x.term(stem[n - 1]))
        ]
        blocks = blocks_from_values(hits)
        played.append(
            Round(k, c, blocks, A=a_cyl.stem, B=b_cyl.stem,
                  note={"m_B": b_cyl.m, "window": [c, b_cyl.m]})
        )
        union = blocks_union(union, blocks)
        prev_c = c
    verdict = (
        il.Verdict(il.VerdictValue.UNDECIDED, "Symbolic", "no rounds played")
        if not played
        else il.classify(ideal, blocks_to_setexpr(union))
    )
    return Transcript(
        mode=mode,
        ideal=ideal.kind,
        rounds=tuple(played),
        union_blocks=union,
        verdict=verdict,
        stem=tuple(stem),
        space="sigma",
        config=config or {},
    )


def build_perm_game(
    x: sq.SeqDescriptor,
    ideal: il.Ideal,
    ball: Ball,
    oracles,
    strat_i: PlayerI,
    rounds: int,
    index_cap: int = DEFAULT_INDEX_CAP,
    config: dict | None = None,
) -> Transcript:
    """Permutation variant: smallest unused ball-avoiding values fill the
    gaps, and every refined cylinder is closed into a permutation of an
    initial segment before the move is extracted (the checkpoint rule)."""
    in_e = lambda i: not ball.contains(x.term(i))
    stem: list[int] = []
    used: set[int] = set()
    played: list[Round] = []
    union: Blocks = ()
    prev_c = 0
    for k in range(1, rounds + 1):
        c = strat_i(tuple(played), k)
        if c < prev_c:
            raise InvalidMove(f"round {k}: c={c} below previous {prev_c}")
        while len(stem) < c - 1:
            e = _next_index(lambda i: i not in used and in_e(i), 0, index_cap)
            stem.append(e)
            used.add(e)
        a_cyl = sq.Cylinder(sq.Space.PI, tuple(stem))
        b_cyl = oracles[k - 1].refine(a_cyl)
        if b_cyl.space is not sq.Space.PI or not b_cyl.extends(a_cyl):
            raise OracleViolation(f"round {k}: refinement is not a sub-cylinder")
        stem = list(b_cyl.stem)
        used = set(stem)
        # Close the prefix into a permutation of {1..max}: the checkpoint.
        top = max(stem, default=0)
        for v in range(1, top + 1):
            if v not in used:
                stem.append(v)
                used.add(v)
        checkpoint = len(stem)
        b_closed = sq.Cylinder(sq.Space.PI, tuple(stem))
        hits = [
            n
            for n in range(c, checkpoint + 1)
            if ball.contains(x.term(stem[n - 1]))
        ]
        blocks = blocks_from_values(hits)
        played.append(
            Round(k, c, blocks, A=a_cyl.stem, B=b_closed.stem,
                  note={"m_B": b_closed.m, "checkpoint": checkpoint,
                        "window": [c, b_closed.m]})
        )
        union = blocks_union(union, blocks)
        prev_c = c
    verdict = (
        il.Verdict(il.VerdictValue.UNDECIDED, "Symbolic", "no rounds played")
        if not played
        else il.classify(ideal, blocks_to_setexpr(union))
    )
    return Transcript(
        mode="pi-game",
        ideal=ideal.kind,
        rounds=tuple(played),
        union_blocks=union,
        verdict=verdict,
        stem=tuple(stem),
        space="pi",
        config=config or {},
    )


# ---------------------------------------------------------------------------
# Series steering


class ForcingOracle(DenseOpenOracle):
    """Adversarial refinement: push the running partial sum to magnitude >= 1.

    Appends smallest admissible indices whose terms drive |S_n| just past 1
    in the direction of the current sum; recovery stays possible because the
    steering window (-1 - s, 1 - s) still meets the value range (-1, 1)."""

    def __init__(self, x: sq.SeqDescriptor, index_cap: int = DEFAULT_INDEX_CAP):
        self.x = x
        self.index_cap = index_cap
        self.name = "forcing"

    def refine(self, cyl):
        stem = list(cyl.stem)
        s = sum((Fraction(self.x.term(i)) for i in stem), Fraction(0))
        sign = 1 if s >= 0 else -1
        last = stem[-1] if stem else 0
        while abs(s) < 1:
            # Steps of magnitude in [1/4, 1) toward the sign of s cross 1
            # with overshoot < 1, so |s| ends in [1, 2) and steering can
            # still recover afterwards.
            last = _next_index(
                lambda i: Fraction(1, 4) <= sign * Fraction(self.x.term(i)) < 1,
                last,
                self.index_cap,
            )
            stem.append(last)
            s += Fraction(self.x.term(last))
        return sq.Cylinder(sq.Space.SIGMA, tuple(stem))


def steer_series(
    x: sq.SeqDescriptor,
    c_schedule,
    rounds: int,
    oracles=None,
    index_cap: int = DEFAULT_INDEX_CAP,
    config: dict | None = None,
) -> Transcript:
    """Greedy partial-sum steering with optional adversarial refinement.

    At each filler position with running sum s, the smallest unused index
    whose term lands in (-1 - s, 1 - s) is appended, keeping |S_n| < 1
    exactly; the move F_k collects window positions where |S_n| >= 1, which
    with pure steering is empty and with forcing oracles is exactly the
    exceedance set of the output.
    """
    if callable(c_schedule):
        schedule = [c_schedule(k) for k in range(1, rounds + 1)]
    else:
        schedule = list(c_schedule)[:rounds]
    if len(schedule) < rounds:
        raise ValueError("c-schedule shorter than the number of rounds")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidMove("c-schedule must increase strictly")
    stem: list[int] = []
    sums: list[Fraction] = [Fraction(0)]  # sums[n] = S_n, sums[0] = 0
    played: list[Round] = []
    union: Blocks = ()
    for k in range(1, rounds + 1):
        c = schedule[k - 1]
        last = stem[-1] if stem else 0
        while len(stem) < c - 1:
            s = sums[-1]
            lo, hi = -1 - s, 1 - s
            try:
                last = _next_index(
                    lambda i: lo < Fraction(x.term(i)) < hi, last, index_cap
                )
            except ExhaustedIndices as exc:
                raise SteeringStuck(str(exc)) from exc
            stem.append(last)
            sums.append(s + Fraction(x.term(last)))
        a_cyl = sq.Cylinder(sq.Space.SIGMA, tuple(stem))
        if oracles is None:
            b_cyl = a_cyl
        else:
            b_cyl = oracles[k - 1].refine(a_cyl)
            if b_cyl.space is not sq.Space.SIGMA or not b_cyl.extends(a_cyl):
                raise OracleViolation(f"round {k}: refinement is not a sub-cylinder")
            stem = list(b_cyl.stem)
            while len(sums) < len(stem) + 1:
                sums.append(sums[-1] + Fraction(x.term(stem[len(sums) - 1])))
        exceed = [n for n in range(c, len(stem) + 1) if abs(sums[n]) >= 1]
        blocks = blocks_from_values(exceed)
        played.append(
            Round(k, c, blocks, A=a_cyl.stem, B=b_cyl.stem,
                  note={"m_B": b_cyl.m, "window": [c, b_cyl.m],
                        "sum": str(sums[-1])})
        )
        union = blocks_union(union, blocks)
    verdict = (
        il.Verdict(il.VerdictValue.UNDECIDED, "Symbolic", "no rounds played")
        if not played
        else il.Verdict(
            il.VerdictValue.IN if not union else il.VerdictValue.UNDECIDED,
            "Symbolic" if not union else f"Horizon({len(stem)})",
            "no exceedances recorded" if not union
            else f"exceedances={blocks_size(union)}",
        )
    )
    return Transcript(
        mode="series",
        ideal=None,
        rounds=tuple(played),
        union_blocks=union,
        verdict=verdict,
        stem=tuple(stem),
        space="sigma",
        config=config or {},
    )


# ---------------------------------------------------------------------------
# Transcript validation


def validate_transcript(t: Transcript, x: sq.SeqDescriptor | None = None,
                        ball: Ball | None = None) -> list[str]:
    """Structural invariant check; returns a list of violations (empty = ok)."""
    problems: list[str] = []
    union: Blocks = ()
    prev_c = 0
    prev_b: tuple[int, ...] | None = None
    for r in t.rounds:
        if r.c is not None:
            if r.c < prev_c:
                problems.append(f"round {r.k}: c not monotone")
            if any(lo < r.c for lo, _ in r.F):
                problems.append(f"round {r.k}: F leaves [c, oo)")
            prev_c = r.c
        union = blocks_union(union, r.F)
        if r.A is not None and r.B is not None:
            if prev_b is not None and r.A[: len(prev_b)] != prev_b:
                problems.append(f"round {r.k}: A does not extend previous B")
            if r.B[: len(r.A)] != r.A:
                problems.append(f"round {r.k}: B does not extend A")
            prev_b = r.B
    if union != t.union_blocks:
        problems.append("unionF differs from the union of round moves")
    if t.stem is not None and prev_b is not None:
        if t.stem[: len(prev_b)] != prev_b:
            problems.append("output stem does not lie in the last cylinder")
    if t.space == "sigma" and t.stem is not None:
        if any(b <= a for a, b in zip(t.stem, t.stem[1:])):
            problems.append("sigma stem not strictly increasing")
    if t.space == "pi" and t.stem is not None:
        if len(set(t.stem)) != len(t.stem):
            problems.append("pi stem values not distinct")
        for r in t.rounds:
            cp = (r.note or {}).get("checkpoint")
            if cp is not None and sorted(t.stem[:cp]) != list(range(1, cp + 1)):
                problems.append(f"round {r.k}: checkpoint {cp} not a bijection")
    if x is not None and ball is not None and t.stem is not None:
        windows: list[tuple[int, int]] = []
        for r in t.rounds:
            w = (r.note or {}).get("window")
            if w:
                windows.append((w[0], w[1]))
        rehit = blocks_from_values(
            n
            for n in range(1, len(t.stem) + 1)
            if ball.contains(x.term(t.stem[n - 1]))
            and any(lo <= n <= hi for lo, hi in windows)
        )
        if rehit != t.union_blocks:
            problems.append("recomputed window hit set differs from unionF")
    return problems
