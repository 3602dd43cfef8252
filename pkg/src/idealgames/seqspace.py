"""Computable real sequences, index transforms, and cylinder sets.

Sequences evaluate exactly (integers and fractions) wherever the descriptor
is rational-valued, so games and series can keep golden transcripts free of
float drift.  Bulk evaluation returns float arrays for the numeric layers.

Descriptors and transforms are immutable; sampling takes caller-supplied
seeds, and parallel sampling needs distinct seeds per task.
"""
from __future__ import annotations

import enum
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import setexpr as sx
from .errors import HorizonCapExceeded, SpaceMismatch

Number = int | Fraction | float


def _as_fraction(v: Number) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


# ---------------------------------------------------------------------------
# Term rules shared by explicit-tail and piecewise descriptors


@dataclass(frozen=True)
class TermRule:
    """One of the registered per-index value rules."""

    kind: str  # "const" | "inv" | "ident" | "altsign"
    value: Number = 0

    def __call__(self, n: int) -> Number:
        if self.kind == "const":
            return self.value
        if self.kind == "inv":
            return Fraction(1, n)
        if self.kind == "ident":
            return n
        if self.kind == "altsign":
            return -1 if n % 2 else 1
        raise ValueError(self.kind)

    def bulk(self, idx: np.ndarray) -> np.ndarray:
        if self.kind == "const":
            return np.full(idx.shape, float(self.value))
        if self.kind == "inv":
            return 1.0 / idx
        if self.kind == "ident":
            return idx.astype(np.float64)
        if self.kind == "altsign":
            return np.where(idx % 2 == 1, -1.0, 1.0)
        raise ValueError(self.kind)

    def hit_indices(self, lo: Fraction, hi: Fraction) -> sx.SetExpr | None:
        """Indices n with rule(n) in [lo, hi], as a set expression."""
        if self.kind == "const":
            c = _as_fraction(self.value)
            return sx.Tail(1) if lo <= c <= hi else sx.Finite(())
        if self.kind == "ident":
            lo_i = max(1, -((-lo.numerator) // lo.denominator))  # ceil(lo)
            hi_i = hi.numerator // hi.denominator  # floor(hi)
            if hi_i < lo_i:
                return sx.Finite(())
            return sx.interval(lo_i, hi_i)
        if self.kind == "inv":
            if hi <= 0:
                return sx.Finite(())
            start = max(1, _ceil_frac(1 / hi))
            if lo <= 0:
                return sx.Tail(start)
            stop = (1 / lo).numerator // (1 / lo).denominator  # floor(1/lo)
            if stop < start:
                return sx.Finite(())
            return sx.interval(start, stop)
        if self.kind == "altsign":
            odd = lo <= -1 <= hi
            even = lo <= 1 <= hi
            if odd and even:
                return sx.Tail(1)
            if odd:
                return sx.ODDS
            if even:
                return sx.EVENS
            return sx.Finite(())
        raise ValueError(self.kind)

    def specials(self) -> tuple[float, ...]:
        if self.kind == "const":
            return (float(self.value),)
        if self.kind == "inv":
            return (0.0,)
        if self.kind == "altsign":
            return (-1.0, 1.0)
        return ()

    def label(self) -> str:
        return str(self.value) if self.kind == "const" else self.kind


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


CONST_ZERO = TermRule("const", 0)
RULE_INV = TermRule("inv")
RULE_IDENT = TermRule("ident")
RULE_ALTSIGN = TermRule("altsign")


# ---------------------------------------------------------------------------
# Sequence descriptors


class SeqDescriptor:
    """A computable real sequence; term(n) is total for n >= 1."""

    def term(self, n: int) -> Number:
        raise NotImplementedError

    def values(self, limit: int) -> np.ndarray:
        """Float array v with v[0] unused and v[n] = term(n) for n <= limit."""
        out = np.empty(limit + 1, dtype=np.float64)
        out[0] = np.nan
        for n in range(1, limit + 1):
            out[n] = float(self.term(n))
        return out

    def hit_set(self, lo: Fraction, hi: Fraction) -> sx.SetExpr | None:
        """Exact index set {n : term(n) in [lo, hi]}, when expressible."""
        return None

    def specials(self) -> tuple[float, ...]:
        return ()

    def label(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class AlternatingPair(SeqDescriptor):
    """v0 at odd positions, v1 at even positions."""

    v0: Number
    v1: Number

    def term(self, n: int) -> Number:
        return self.v0 if n % 2 else self.v1

    def values(self, limit: int) -> np.ndarray:
        out = np.empty(limit + 1)
        out[0] = np.nan
        out[1::2] = float(self.v0)
        out[2::2] = float(self.v1)
        return out

    def hit_set(self, lo, hi):
        odd = lo <= _as_fraction(self.v0) <= hi
        even = lo <= _as_fraction(self.v1) <= hi
        if odd and even:
            return sx.Tail(1)
        if odd:
            return sx.ODDS
        if even:
            return sx.EVENS
        return sx.Finite(())

    def specials(self):
        return (float(self.v0), float(self.v1))

    def label(self):
        return f"alt({self.v0},{self.v1})"


@dataclass(frozen=True)
class ExplicitTail(SeqDescriptor):
    """Finite explicit prefix followed by a registered tail rule."""

    prefix: tuple[Number, ...]
    tail: TermRule

    def term(self, n: int) -> Number:
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.tail(n)

    def values(self, limit: int) -> np.ndarray:
        out = np.empty(limit + 1)
        out[0] = np.nan
        k = min(len(self.prefix), limit)
        out[1 : k + 1] = [float(v) for v in self.prefix[:k]]
        if limit > k:
            out[k + 1 :] = self.tail.bulk(np.arange(k + 1, limit + 1))
        return out

    def hit_set(self, lo, hi):
        tail_idx = self.tail.hit_indices(lo, hi)
        if tail_idx is None:
            return None
        k = len(self.prefix)
        expr: sx.SetExpr = (
            tail_idx if k == 0 else sx.Inter(tail_idx, sx.Tail(k + 1))
        )
        exceptions = tuple(
            i + 1
            for i, v in enumerate(self.prefix)
            if lo <= _as_fraction(v) <= hi
        )
        if exceptions:
            expr = sx.Union(sx.Finite(exceptions), expr)
        return expr

    def specials(self):
        return self.tail.specials()

    def label(self):
        if not self.prefix and self.tail.kind == "inv":
            return "inv"
        return f"seq(prefix={list(self.prefix)},tail={self.tail.label()})"


@dataclass(frozen=True)
class PiecewiseOnSet(SeqDescriptor):
    """on_rule(n) for n in the set, off_rule(n) outside it."""

    on_set: sx.SetExpr
    on_rule: TermRule
    off_rule: TermRule

    def term(self, n: int) -> Number:
        return self.on_rule(n) if self.on_set.member(n) else self.off_rule(n)

    def values(self, limit: int) -> np.ndarray:
        idx = np.arange(limit + 1)
        ind = sx.indicator(self.on_set, limit)
        out = np.where(ind, self.on_rule.bulk(np.maximum(idx, 1)),
                       self.off_rule.bulk(np.maximum(idx, 1)))
        out[0] = np.nan
        return out

    def hit_set(self, lo, hi):
        on_idx = self.on_rule.hit_indices(lo, hi)
        off_idx = self.off_rule.hit_indices(lo, hi)
        if on_idx is None or off_idx is None:
            return None
        return sx.Union(
            sx.Inter(self.on_set, on_idx),
            sx.Inter(sx.Compl(self.on_set), off_idx),
        )

    def specials(self):
        return tuple(dict.fromkeys(self.on_rule.specials() + self.off_rule.specials()))

    def label(self):
        return (
            f"piecewise({self.on_set.to_dsl()},"
            f"{self.on_rule.label()},{self.off_rule.label()})"
        )


_RATIONALS: list[Fraction] = []
_RATIONALS_LOCK = threading.Lock()


def _rationals_through(n: int) -> list[Fraction]:
    """First n reduced fractions of (0,1), enumerated by denominator."""
    with _RATIONALS_LOCK:
        q = _RATIONALS[-1].denominator if _RATIONALS else 1
        while len(_RATIONALS) < n:
            q += 1
            for p in range(1, q):
                if gcd(p, q) == 1:
                    _RATIONALS.append(Fraction(p, q))
        return _RATIONALS[:n]


@dataclass(frozen=True)
class RationalEnum(SeqDescriptor):
    """Every rational in (0,1) exactly once: 1/2, 1/3, 2/3, 1/4, 3/4, ..."""

    def term(self, n: int) -> Fraction:
        return _rationals_through(n)[n - 1]

    def values(self, limit: int) -> np.ndarray:
        out = np.empty(limit + 1)
        out[0] = np.nan
        out[1:] = [float(q) for q in _rationals_through(limit)]
        return out

    def label(self):
        return "ratenum"


@dataclass(frozen=True)
class SignedRationalEnum(SeqDescriptor):
    """The (0,1) enumeration interleaved with its negation: q1, -q1, q2, ..."""

    def term(self, n: int) -> Fraction:
        k = (n + 1) // 2
        q = _rationals_through(k)[k - 1]
        return q if n % 2 else -q

    def values(self, limit: int) -> np.ndarray:
        k = (limit + 1) // 2
        qs = np.array([float(q) for q in _rationals_through(k)])
        out = np.empty(limit + 1)
        out[0] = np.nan
        out[1::2] = qs[: (limit + 1) // 2]
        out[2::2] = -qs[: limit // 2]
        return out

    def label(self):
        return "ratenum-signed"


# ---------------------------------------------------------------------------
# Index transforms: subsequences and permutations


class Space(enum.Enum):
    SIGMA = "sigma"
    PI = "pi"


_SET_ENUM_CAP = 50_000_000


@dataclass(frozen=True)
class Subseq:
    """Strictly increasing index map: explicit stem plus a tail rule.

    Tail "shift" continues with consecutive integers after the stem; tail
    "set" continues along the members of an infinite set expression.
    """

    stem: tuple[int, ...] = ()
    tail: str = "shift"
    tail_set: sx.SetExpr | None = None

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.stem, self.stem[1:])):
            raise ValueError("subsequence stem must be strictly increasing")
        if self.stem and self.stem[0] < 1:
            raise ValueError("indices start at 1")
        if self.tail == "set" and self.tail_set is None:
            raise ValueError("tail 'set' needs a set expression")

    @classmethod
    def from_set(cls, s: sx.SetExpr) -> "Subseq":
        return cls((), "set", s)

    def _set_members(self, need: int, floor_val: int) -> list[int]:
        cap = max(1024, 4 * (floor_val + need))
        while True:
            members = [v for v in sx.prefix(self.tail_set, cap) if v > floor_val]
            if len(members) >= need:
                return members[:need]
            if cap > _SET_ENUM_CAP:
                raise HorizonCapExceeded(
                    f"{self.tail_set.to_dsl()} yielded only {len(members)} "
                    f"members above {floor_val} within {cap}"
                )
            cap *= 4

    def indices(self, limit: int) -> np.ndarray:
        """Array s with s[0] unused and s[n] the n-th index, n <= limit."""
        out = np.zeros(limit + 1, dtype=np.int64)
        k = min(len(self.stem), limit)
        out[1 : k + 1] = self.stem[:k]
        if limit > k:
            last = self.stem[k - 1] if k else 0
            if self.tail == "shift":
                out[k + 1 :] = last + np.arange(1, limit - k + 1)
            else:
                out[k + 1 :] = self._set_members(limit - k, last)
        return out

    def index(self, n: int) -> int:
        if n < 1:
            raise ValueError("positions start at 1")
        if n <= len(self.stem):
            return self.stem[n - 1]
        if self.tail == "shift":
            last = self.stem[-1] if self.stem else 0
            return last + (n - len(self.stem))
        return int(self.indices(n)[n])

    def label(self) -> str:
        if self.tail == "set":
            return f"set({self.tail_set.to_dsl()})"
        return "stem[%s]" % ",".join(str(v) for v in self.stem)


@dataclass(frozen=True)
class Perm:
    """Bijection of N: a stem permuting an initial segment, identity beyond.

    Checkpoints are the positions m at which the first m values are exactly
    {1, ..., m}; the stem length is always one of them.
    """

    stem: tuple[int, ...] = ()
    checkpoints: tuple[int, ...] = ()

    def __post_init__(self):
        if len(set(self.stem)) != len(self.stem):
            raise ValueError("permutation stem values must be distinct")
        if self.stem and sorted(self.stem) != list(range(1, len(self.stem) + 1)):
            raise ValueError(
                "stem must permute an initial segment so the identity tail "
                "yields a bijection"
            )
        for m in self.checkpoints:
            if sorted(self.stem[:m]) != list(range(1, m + 1)):
                raise ValueError(f"checkpoint {m} does not close the prefix")

    def indices(self, limit: int) -> np.ndarray:
        out = np.zeros(limit + 1, dtype=np.int64)
        k = min(len(self.stem), limit)
        out[1 : k + 1] = self.stem[:k]
        if limit > k:
            out[k + 1 :] = np.arange(k + 1, limit + 1)
        return out

    def index(self, n: int) -> int:
        if n < 1:
            raise ValueError("positions start at 1")
        return self.stem[n - 1] if n <= len(self.stem) else n

    def label(self) -> str:
        return "perm-stem[%s]" % ",".join(str(v) for v in self.stem)


@dataclass(frozen=True)
class Cylinder:
    """Basic open set: all transforms extending a fixed finite stem."""

    space: Space
    stem: tuple[int, ...]

    def __post_init__(self):
        if self.space is Space.SIGMA:
            if any(b <= a for a, b in zip(self.stem, self.stem[1:])):
                raise ValueError("sigma stems are strictly increasing")
        elif len(set(self.stem)) != len(self.stem):
            raise ValueError("pi stems hold distinct values")
        if self.stem and min(self.stem) < 1:
            raise ValueError("indices start at 1")

    @property
    def m(self) -> int:
        """Stem bound: last value in sigma space, max value in pi space."""
        if not self.stem:
            return 0
        return self.stem[-1] if self.space is Space.SIGMA else max(self.stem)

    def extends(self, other: "Cylinder") -> bool:
        """True iff this cylinder refines (is contained in) the other."""
        if self.space is not other.space:
            raise SpaceMismatch("cannot compare cylinders across spaces")
        return self.stem[: len(other.stem)] == other.stem


def cylinder_contains(cyl: Cylinder, t: Subseq | Perm) -> bool:
    """True iff the transform lies in the cylinder (matches its stem)."""
    if isinstance(t, Subseq):
        if cyl.space is not Space.SIGMA:
            raise SpaceMismatch("subsequence tested against a pi cylinder")
    elif isinstance(t, Perm):
        if cyl.space is not Space.PI:
            raise SpaceMismatch("permutation tested against a sigma cylinder")
    else:
        raise TypeError(type(t).__name__)
    return all(t.index(i + 1) == v for i, v in enumerate(cyl.stem))


@dataclass(frozen=True)
class Transformed(SeqDescriptor):
    """The sequence x composed with an index transform."""

    inner: SeqDescriptor
    transform: Subseq | Perm

    def term(self, n: int) -> Number:
        return self.inner.term(self.transform.index(n))

    def values(self, limit: int) -> np.ndarray:
        idx = self.transform.indices(limit)
        top = int(idx.max()) if limit else 1
        base = self.inner.values(top)
        out = np.empty(limit + 1)
        out[0] = np.nan
        out[1:] = base[idx[1:]]
        return out

    def specials(self):
        return self.inner.specials()

    def label(self):
        return f"{self.inner.label()}@{self.transform.label()}"


def subseq_apply(sigma: Subseq, x: SeqDescriptor) -> SeqDescriptor:
    """The subsequence (x at sigma(n))."""
    return Transformed(x, sigma)


def perm_apply(pi: Perm, x: SeqDescriptor) -> SeqDescriptor:
    """The rearrangement (x at pi(n))."""
    return Transformed(x, pi)


def eval_term(x: SeqDescriptor, n: int) -> Number:
    """The n-th term of the sequence."""
    return x.term(n)


def draw_inclusion_bits(seed: int | random.Random, limit: int) -> int:
    """Nonzero fair-coin inclusion mask; bit n-1 set means index n included."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    while True:
        bits = rng.getrandbits(limit)
        if bits:
            return bits


def sample_subseq(seed: int | random.Random, limit: int) -> Subseq:
    """Fair-coin inclusion of each index up to the limit, resampled if empty.

    Identifying increasing index maps with binary expansions in (0, 1], this
    is exactly the pushforward of Lebesgue measure restricted to cylinders
    of horizon ``limit``; the discarded empty draw has probability 2**-limit.
    """
    bits = draw_inclusion_bits(seed, limit)
    stem = tuple(n for n in range(1, limit + 1) if (bits >> (n - 1)) & 1)
    return Subseq(stem, "shift")
