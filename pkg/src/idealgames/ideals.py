"""Built-in ideals on N with symbolic and finite-horizon classifiers.

Four ideals are supported: the finite sets, the density-zero sets, the sets
with convergent reciprocal sum, and the sets meeting the odd integers only
finitely often.  Classification is three-valued: a finite horizon cannot
decide tail properties, so Undecided is a first-class outcome rather than a
silent misclassification.

All classifiers are pure functions of (ideal, expression, horizon) and are
safe to call in parallel.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace

import numpy as np

from . import periodic
from . import setexpr as sx
from .errors import HorizonTooSmall, OutsideFragment


class VerdictValue(enum.Enum):
    IN = "InIdeal"
    NOT_IN = "NotInIdeal"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Verdict:
    value: VerdictValue
    mode: str  # "Symbolic" or "Horizon(N)"
    evidence: str

    @property
    def decided(self) -> bool:
        return self.value is not VerdictValue.UNDECIDED

    def as_dict(self) -> dict:
        return {"value": self.value.value, "mode": self.mode, "evidence": self.evidence}


def _symbolic(value: VerdictValue, evidence: str) -> Verdict:
    return Verdict(value, "Symbolic", evidence)


def _horizon(value: VerdictValue, n: int, evidence: str) -> Verdict:
    return Verdict(value, f"Horizon({n})", evidence)


FIN = "fin"
DENSITY0 = "density0"
SUMMABLE = "summable"
FUBINI_ODD = "fubini-odd"

KINDS = (FIN, DENSITY0, SUMMABLE, FUBINI_ODD)


@dataclass(frozen=True)
class Ideal:
    """Descriptor of a built-in ideal plus its horizon-classifier thresholds."""

    kind: str
    theta_low: float = 0.02
    theta_high: float = 0.10
    sum_bound: float = 4.0
    fin_cutoff: int = 50
    odd_cutoff: int = 50
    interval_evidence: int = 10

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ideal kind {self.kind!r}")
        if not (0.0 < self.theta_low < self.theta_high < 1.0):
            raise ValueError("need 0 < theta_low < theta_high < 1")
        if self.sum_bound <= 0 or self.fin_cutoff < 1 or self.odd_cutoff < 1:
            raise ValueError("bounds must be positive")

    @classmethod
    def from_name(cls, name: str, **kwargs) -> "Ideal":
        return cls(kind=name, **kwargs)


def fin() -> Ideal:
    return Ideal(FIN)


def density0() -> Ideal:
    return Ideal(DENSITY0)


def summable() -> Ideal:
    return Ideal(SUMMABLE)


def fubini_odd() -> Ideal:
    return Ideal(FUBINI_ODD)


BUILTINS = (fin(), density0(), summable(), fubini_odd())


class MaximalIdealStub:
    """Documentation stub: maximal ideals exist but are non-constructive.

    A maximal ideal would decide every subset of N, which no finite amount
    of computation can do; the classifiers in this module therefore cover
    the four built-in ideals only.  This class cannot be instantiated.
    """

    def __init__(self, *args, **kwargs):
        raise TypeError("maximal ideals are non-constructive; see class docs")


# ---------------------------------------------------------------------------
# Talagrand interval witnesses


@dataclass(frozen=True)
class TalagrandWitness:
    """Interval witness of meagerness: any set containing infinitely many
    full blocks [iota(n), iota(n+1)) lies outside the ideal."""

    ideal: Ideal
    gen: sx.Generator

    def iota(self, n: int) -> int:
        return self.gen.value(n)

    def block(self, n: int) -> tuple[int, int]:
        return (self.gen.value(n), self.gen.value(n + 1))

    def full_blocks_within(self, s: sx.SetExpr, limit: int) -> int:
        """How many full witness blocks at or below the limit s contains."""
        ind = sx.indicator(s, limit)
        hits = 0
        n = 1
        while True:
            lo, hi = self.block(n)
            if hi > limit + 1:
                return hits
            if ind[lo:hi].all():
                hits += 1
            n += 1


_WITNESS_GEN = {
    FIN: "linear",
    DENSITY0: "pow2",
    SUMMABLE: "esum",
    FUBINI_ODD: "odd2",
}


def talagrand_witness(ideal: Ideal) -> TalagrandWitness:
    """Interval witness for a built-in ideal (all four are meager)."""
    return TalagrandWitness(ideal, sx.generator(_WITNESS_GEN[ideal.kind]))


def _contains_infinite_witness_schedule(s: sx.SetExpr, gen: sx.Generator) -> bool:
    """True when s provably contains infinitely many full blocks of gen."""
    if isinstance(s, sx.IntervalSchedule) and s.gen is gen:
        try:
            sel = periodic.reduce(s.selector)
        except periodic.TooComplex:
            return False
        return sel is not None and not sel.is_finite
    if isinstance(s, sx.Union):
        return _contains_infinite_witness_schedule(
            s.left, gen
        ) or _contains_infinite_witness_schedule(s.right, gen)
    return False


# ---------------------------------------------------------------------------
# Symbolic classification


@dataclass(frozen=True)
class _Bounds:
    """Sound density/parity/harmonic facts for the non-periodic layer."""

    finite: bool | None
    lodens_lo: float
    lodens_hi: float
    updens_lo: float
    updens_hi: float
    harmonic: bool | None  # True = reciprocal sum diverges
    odd_finite: bool | None

    def settled(self) -> "_Bounds":
        if self.updens_lo > 0:
            return replace(self, finite=False, harmonic=True)
        return self


_UNKNOWN = _Bounds(None, 0.0, 1.0, 0.0, 1.0, None, None)


def _bounds_of(s: sx.SetExpr) -> _Bounds:
    try:
        p = periodic.reduce(s)
    except periodic.TooComplex:
        p = None
    if p is not None:
        d = float(p.density())
        return _Bounds(
            finite=p.is_finite,
            lodens_lo=d,
            lodens_hi=d,
            updens_lo=d,
            updens_hi=d,
            harmonic=p.reciprocal_sum_diverges(),
            odd_finite=p.odd_part_finite(),
        )
    if isinstance(s, sx.IntervalSchedule):
        gen = s.gen
        if gen.min_ratio is None:
            return _UNKNOWN
        try:
            sel = periodic.reduce(s.selector)
        except periodic.TooComplex:
            return _UNKNOWN
        if sel is None or sel.is_finite:
            return _UNKNOWN
        # Infinitely many blocks of geometrically growing length: right
        # endpoints see density >= 1 - 1/ratio, the reciprocal sum picks up
        # a fixed positive mass per block, and block lengths grow beyond
        # every bound so both parities recur forever.
        updens_lo = 1.0 - 1.0 / gen.min_ratio
        harmonic = True if (gen.interval_harmonic_lower or 0) > 0 else None
        return _Bounds(False, 0.0, 1.0, updens_lo, 1.0, harmonic, False)
    if isinstance(s, sx.Union):
        a, b = _bounds_of(s.left), _bounds_of(s.right)
        finite = (
            True
            if a.finite is True and b.finite is True
            else False
            if a.finite is False or b.finite is False
            else None
        )
        harmonic = (
            True
            if a.harmonic is True or b.harmonic is True
            else False
            if a.harmonic is False and b.harmonic is False
            else None
        )
        odd = (
            True
            if a.odd_finite is True and b.odd_finite is True
            else False
            if a.odd_finite is False or b.odd_finite is False
            else None
        )
        return _Bounds(
            finite,
            max(a.lodens_lo, b.lodens_lo),
            min(1.0, a.lodens_hi + b.updens_hi, b.lodens_hi + a.updens_hi),
            max(a.updens_lo, b.updens_lo),
            min(1.0, a.updens_hi + b.updens_hi),
            harmonic,
            odd,
        ).settled()
    if isinstance(s, sx.Inter):
        a, b = _bounds_of(s.left), _bounds_of(s.right)
        finite = True if a.finite is True or b.finite is True else None
        harmonic = False if a.harmonic is False or b.harmonic is False else None
        odd = True if a.odd_finite is True or b.odd_finite is True else None
        return _Bounds(
            finite,
            max(0.0, a.lodens_lo + b.lodens_lo - 1.0),
            min(a.lodens_hi, b.lodens_hi),
            max(0.0, a.updens_lo + b.lodens_lo - 1.0, b.updens_lo + a.lodens_lo - 1.0),
            min(a.updens_hi, b.updens_hi),
            harmonic,
            odd,
        ).settled()
    if isinstance(s, sx.Compl):
        a = _bounds_of(s.inner)
        finite = False if a.finite is True else None
        odd = False if a.odd_finite is True else None
        return _Bounds(
            finite,
            1.0 - a.updens_hi,
            1.0 - a.updens_lo,
            1.0 - a.lodens_hi,
            1.0 - a.lodens_lo,
            None,
            odd,
        ).settled()
    return _UNKNOWN


def classify_symbolic(ideal: Ideal, s: sx.SetExpr) -> Verdict:
    """Exact membership verdict over the decidable fragment.

    Raises OutsideFragment when no sound symbolic argument applies; the
    caller should fall back to classify_horizon.
    """
    witness = talagrand_witness(ideal)
    if _contains_infinite_witness_schedule(s, witness.gen):
        return _symbolic(
            VerdictValue.NOT_IN, "contains infinitely many full witness blocks"
        )
    try:
        p = periodic.reduce(s)
    except periodic.TooComplex:
        p = None
    if p is not None:
        if ideal.kind == FIN:
            if p.is_finite:
                return _symbolic(VerdictValue.IN, f"finite, size={p.block_count()}")
            return _symbolic(VerdictValue.NOT_IN, f"density={p.density()}")
        if ideal.kind == DENSITY0:
            d = p.density()
            if d == 0:
                return _symbolic(VerdictValue.IN, "density=0")
            return _symbolic(VerdictValue.NOT_IN, f"density={d}")
        if ideal.kind == SUMMABLE:
            if p.is_finite:
                return _symbolic(VerdictValue.IN, "finite, reciprocal sum converges")
            return _symbolic(
                VerdictValue.NOT_IN,
                f"contains a progression, reciprocal sum diverges (density={p.density()})",
            )
        if ideal.kind == FUBINI_ODD:
            if p.odd_part_finite():
                return _symbolic(VerdictValue.IN, "odd part finite")
            return _symbolic(VerdictValue.NOT_IN, "odd part infinite")
    b = _bounds_of(s)
    if ideal.kind == FIN:
        if b.finite is True:
            return _symbolic(VerdictValue.IN, "finite")
        if b.finite is False:
            return _symbolic(VerdictValue.NOT_IN, "infinite")
    elif ideal.kind == DENSITY0:
        if b.finite is True or b.updens_hi == 0.0:
            return _symbolic(VerdictValue.IN, "upper density 0")
        if b.updens_lo > 0.0:
            return _symbolic(
                VerdictValue.NOT_IN, f"upper density >= {b.updens_lo:.6g}"
            )
    elif ideal.kind == SUMMABLE:
        if b.harmonic is True:
            return _symbolic(VerdictValue.NOT_IN, "reciprocal sum diverges")
        if b.harmonic is False or b.finite is True:
            return _symbolic(VerdictValue.IN, "reciprocal sum converges")
    elif ideal.kind == FUBINI_ODD:
        if b.odd_finite is True:
            return _symbolic(VerdictValue.IN, "odd part finite")
        if b.odd_finite is False:
            return _symbolic(VerdictValue.NOT_IN, "odd part infinite")
    raise OutsideFragment(
        f"{s.to_dsl()} is not symbolically decidable for ideal {ideal.kind}"
    )


# ---------------------------------------------------------------------------
# Finite-horizon classification


def _tail_reciprocal_upper(s: sx.SetExpr, horizon: int) -> float | None:
    try:
        p = periodic.reduce(s)
    except periodic.TooComplex:
        return None
    return None if p is None else p.tail_reciprocal_upper(horizon)


def classify_horizon_counts(
    ideal: Ideal, ind: np.ndarray, horizon: int, tail_upper: float | None = None
) -> Verdict:
    """Horizon verdict from a membership indicator (slot 0 unused)."""
    if ideal.kind == FIN:
        c = int(ind.sum())
        if c >= ideal.fin_cutoff:
            return _horizon(VerdictValue.NOT_IN, horizon, f"count={c}")
        return _horizon(VerdictValue.UNDECIDED, horizon, f"count={c}")
    if ideal.kind == DENSITY0:
        cum = np.cumsum(ind)
        lo = max(horizon // 2, 1)
        dhat = float(
            (cum[lo : horizon + 1] / np.arange(lo, horizon + 1)).max()
        )
        if dhat < ideal.theta_low:
            return _horizon(VerdictValue.IN, horizon, f"dhat={dhat:.6g}")
        if dhat > ideal.theta_high:
            return _horizon(VerdictValue.NOT_IN, horizon, f"dhat={dhat:.6g}")
        return _horizon(VerdictValue.UNDECIDED, horizon, f"dhat={dhat:.6g}")
    if ideal.kind == SUMMABLE:
        n = np.arange(1, horizon + 1, dtype=np.float64)
        total = float((ind[1 : horizon + 1] / n).sum())
        if total > ideal.sum_bound:
            return _horizon(VerdictValue.NOT_IN, horizon, f"recip-sum={total:.6g}")
        if tail_upper is not None and total + tail_upper < ideal.sum_bound:
            return _horizon(
                VerdictValue.IN,
                horizon,
                f"recip-sum={total:.6g}, certified tail<={tail_upper:.6g}",
            )
        return _horizon(VerdictValue.UNDECIDED, horizon, f"recip-sum={total:.6g}")
    if ideal.kind == FUBINI_ODD:
        c = int(ind[1 : horizon + 1 : 2].sum())
        if c >= ideal.odd_cutoff:
            return _horizon(VerdictValue.NOT_IN, horizon, f"odd-count={c}")
        return _horizon(VerdictValue.UNDECIDED, horizon, f"odd-count={c}")
    raise ValueError(ideal.kind)


def classify_horizon(ideal: Ideal, s: sx.SetExpr, horizon: int) -> Verdict:
    """Finite-horizon membership verdict; honest Undecided when unsure."""
    if horizon < 100:
        raise HorizonTooSmall(f"horizon {horizon} < 100")
    ind = sx.indicator(s, horizon)
    tail_upper = None
    if ideal.kind == SUMMABLE:
        tail_upper = _tail_reciprocal_upper(s, horizon)
    return classify_horizon_counts(ideal, ind, horizon, tail_upper)


def classify(ideal: Ideal, s: sx.SetExpr, horizon: int = 10_000) -> Verdict:
    """Symbolic verdict when available, horizon verdict otherwise."""
    try:
        return classify_symbolic(ideal, s)
    except OutsideFragment:
        return classify_horizon(ideal, s, horizon)


# ---------------------------------------------------------------------------
# Witness soundness harness


@dataclass(frozen=True)
class SoundnessReport:
    ideal: str
    trials: int
    horizon: int
    seed: int
    fraction: float
    failures: tuple[dict, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "ideal": self.ideal,
            "trials": self.trials,
            "horizon": self.horizon,
            "seed": self.seed,
            "fraction": self.fraction,
            "failures": list(self.failures),
        }


def witness_soundness_report(
    ideal: Ideal,
    witness: TalagrandWitness | None = None,
    trials: int = 100,
    seed: int = 0,
    horizon: int = 100_000,
) -> SoundnessReport:
    """Finite-scale check of the interval property of a witness.

    Each trial selects at least every other witness block beyond a small
    random offset (plus random extras), materializes the union as an
    interval schedule, and classifies it at the horizon.  A sound witness
    classifies NotInIdeal every time.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if witness is None:
        witness = talagrand_witness(ideal)
    rng = random.Random(seed)
    failures: list[dict] = []
    for trial in range(trials):
        offset = rng.randint(1, 4)
        extras = tuple(
            j
            for j in range(1, offset + 10)
            if (j - offset) % 2 != 0 and rng.random() < 0.5
        )
        selector: sx.SetExpr = sx.ArithProg(offset, 2)
        if extras:
            selector = sx.Union(selector, sx.Finite(extras))
        trial_set = sx.IntervalSchedule(witness.gen, selector)
        verdict = classify_horizon(ideal, trial_set, horizon)
        if verdict.value is not VerdictValue.NOT_IN:
            failures.append(
                {
                    "trial": trial,
                    "offset": offset,
                    "extras": list(extras),
                    "verdict": verdict.as_dict(),
                }
            )
    fraction = (trials - len(failures)) / trials
    return SoundnessReport(
        ideal.kind, trials, horizon, seed, fraction, tuple(failures)
    )
