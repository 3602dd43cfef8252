"""Symbolic algebra of decidable subsets of the positive integers.

The universe is N = {1, 2, 3, ...}; 0 is excluded everywhere.  Expressions
are immutable after construction and safe to share across threads; interval
generators memoize their values behind a lock.
"""
from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import IdealGamesError

# e to 50 decimal digits, used so that ceil(e * n) and ceil(e ** n) are
# computed exactly for every integer magnitude this package can reach.
E_EXACT = Fraction(
    "2.71828182845904523536028747135266249775724709369996"
)


def _ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


class Generator:
    """Strictly increasing positive-integer sequence with memoized values.

    ``affine=(a, b)`` declares the closed form value(n) = a*n + b, which the
    symbolic layer exploits for exact reductions.  ``min_ratio`` declares a
    sound lower bound on value(n+1)/value(n); ``interval_harmonic_lower`` a
    sound lower bound on sum(1/i for i in [value(n), value(n+1))).
    """

    def __init__(
        self,
        name: str,
        fn=None,
        step=None,
        first: int | None = None,
        affine: tuple[int, int] | None = None,
        min_ratio: float | None = None,
        interval_harmonic_lower: float | None = None,
        max_index: int = 10_000_000,
    ):
        if (fn is None) == (step is None):
            raise ValueError("exactly one of fn/step is required")
        self.name = name
        self._fn = fn
        self._step = step
        self.affine = affine
        self.min_ratio = min_ratio
        self.interval_harmonic_lower = interval_harmonic_lower
        self.max_index = max_index
        self._memo: list[int] = [] if first is None else [first]
        self._lock = threading.Lock()

    def value(self, n: int) -> int:
        """The n-th term (1-indexed)."""
        if n < 1:
            raise ValueError(f"generator index must be >= 1, got {n}")
        if self.affine is not None:
            a, b = self.affine
            return a * n + b
        if n > self.max_index:
            raise IdealGamesError(f"generator {self.name} index {n} over cap")
        with self._lock:
            while len(self._memo) < n:
                if self._fn is not None:
                    nxt = self._fn(len(self._memo) + 1)
                else:
                    nxt = self._step(self._memo[-1])
                if self._memo and nxt <= self._memo[-1]:
                    raise IdealGamesError(
                        f"generator {self.name} is not strictly increasing"
                    )
                self._memo.append(nxt)
            return self._memo[n - 1]

    def values_through(self, limit: int) -> list[int]:
        """All terms <= limit, plus the first term beyond it."""
        vals: list[int] = []
        n = 1
        while True:
            v = self.value(n)
            vals.append(v)
            if v > limit:
                return vals
            n += 1

    def index_of(self, m: int) -> int | None:
        """Index j with value(j) <= m < value(j+1), or None if m < value(1)."""
        if m < self.value(1):
            return None
        if self.affine is not None:
            a, b = self.affine
            return (m - b) // a
        vals = self.values_through(m)
        # vals[-1] > m >= vals[-2]
        j = bisect.bisect_right(vals, m)
        return j if j < len(vals) else len(vals) - 1

    def first_index_at_least(self, bound: int) -> int:
        """Smallest index j with value(j) >= bound."""
        if self.affine is not None:
            a, b = self.affine
            return max(1, -((-(bound - b)) // a))  # ceil((bound - b) / a)
        j = 1
        while self.value(j) < bound:
            j += 1
        return j


_REGISTRY: dict[str, Generator] = {}


def register_generator(gen: Generator) -> Generator:
    _REGISTRY[gen.name] = gen
    return gen


def generator(name: str) -> Generator:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise IdealGamesError(f"unknown generator {name!r}") from None


register_generator(Generator("linear", fn=lambda n: n, affine=(1, 0)))
register_generator(
    Generator(
        "pow2",
        fn=lambda n: 2**n,
        min_ratio=2.0,
        interval_harmonic_lower=0.69,
    )
)
register_generator(
    Generator(
        "expE",
        fn=lambda n: _ceil_frac(E_EXACT**n),
        min_ratio=1.9,
        interval_harmonic_lower=0.64,
    )
)
# [value(n), value(n+1)) always carries harmonic mass >= 1: value(1) = 2 and
# value(n+1) = ceil(e * value(n)) + 1.
register_generator(
    Generator(
        "esum",
        step=lambda prev: _ceil_frac(E_EXACT * prev) + 1,
        first=2,
        min_ratio=2.7,
        interval_harmonic_lower=1.0,
    )
)
register_generator(Generator("odd2", fn=lambda n: 2 * n - 1, affine=(2, -1)))


class SetExpr:
    """Base class; subclasses form a Boolean algebra with exact membership."""

    def member(self, n: int) -> bool:
        raise NotImplementedError

    def children(self) -> tuple["SetExpr", ...]:
        return ()

    def to_dsl(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.to_dsl()

    def __eq__(self, other) -> bool:
        return isinstance(other, SetExpr) and self.to_dsl() == other.to_dsl()

    def __hash__(self) -> int:
        return hash(self.to_dsl())


def _check_positive(n: int) -> None:
    if n < 1:
        raise ValueError(f"universe starts at 1, got {n}")


@dataclass(frozen=True, eq=False)
class Finite(SetExpr):
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(sorted(set(self.values)))
        if vals and vals[0] < 1:
            raise ValueError("finite sets hold positive integers only")
        object.__setattr__(self, "values", vals)

    def member(self, n: int) -> bool:
        _check_positive(n)
        i = bisect.bisect_left(self.values, n)
        return i < len(self.values) and self.values[i] == n

    def to_dsl(self) -> str:
        return "finite{%s}" % ",".join(str(v) for v in self.values)


@dataclass(frozen=True, eq=False)
class ArithProg(SetExpr):
    """The progression {first, first + step, first + 2*step, ...}."""

    first: int
    step: int

    def __post_init__(self):
        if self.first < 1 or self.step < 1:
            raise ValueError("ArithProg needs first >= 1 and step >= 1")

    def member(self, n: int) -> bool:
        _check_positive(n)
        return n >= self.first and (n - self.first) % self.step == 0

    def to_dsl(self) -> str:
        return f"ap({self.first},{self.step})"


@dataclass(frozen=True, eq=False)
class Tail(SetExpr):
    """All integers >= start."""

    start: int

    def __post_init__(self):
        if self.start < 1:
            raise ValueError("Tail needs start >= 1")

    def member(self, n: int) -> bool:
        _check_positive(n)
        return n >= self.start

    def to_dsl(self) -> str:
        return f"tail({self.start})"


@dataclass(frozen=True, eq=False)
class IntervalSchedule(SetExpr):
    """Union of blocks [value(j), value(j+1)) over selected generator indices.

    The selector is itself a SetExpr over indices; it must stay inside the
    eventually-periodic fragment (Finite/ArithProg/Tail and Boolean
    combinations) so that membership and classification remain decidable.
    """

    gen: Generator
    selector: SetExpr

    def member(self, n: int) -> bool:
        _check_positive(n)
        j = self.gen.index_of(n)
        return j is not None and self.selector.member(j)

    def to_dsl(self) -> str:
        sel = self.selector
        if isinstance(sel, Tail) and sel.start == 1:
            return f"isch({self.gen.name})"
        if isinstance(sel, ArithProg) and (sel.first, sel.step) == (2, 2):
            return f"isch({self.gen.name},even)"
        if isinstance(sel, Finite):
            return "isch(%s,{%s})" % (
                self.gen.name,
                ",".join(str(v) for v in sel.values),
            )
        return f"isch({self.gen.name},<{sel.to_dsl()}>)"


def schedule_all(gen: Generator) -> IntervalSchedule:
    return IntervalSchedule(gen, Tail(1))


def schedule_even(gen: Generator) -> IntervalSchedule:
    return IntervalSchedule(gen, ArithProg(2, 2))


def schedule_explicit(gen: Generator, indices) -> IntervalSchedule:
    return IntervalSchedule(gen, Finite(tuple(indices)))


@dataclass(frozen=True, eq=False)
class Union(SetExpr):
    left: SetExpr
    right: SetExpr

    def member(self, n: int) -> bool:
        return self.left.member(n) or self.right.member(n)

    def children(self):
        return (self.left, self.right)

    def to_dsl(self) -> str:
        return f"union({self.left.to_dsl()},{self.right.to_dsl()})"


@dataclass(frozen=True, eq=False)
class Inter(SetExpr):
    left: SetExpr
    right: SetExpr

    def member(self, n: int) -> bool:
        return self.left.member(n) and self.right.member(n)

    def children(self):
        return (self.left, self.right)

    def to_dsl(self) -> str:
        return f"inter({self.left.to_dsl()},{self.right.to_dsl()})"


@dataclass(frozen=True, eq=False)
class Compl(SetExpr):
    """Complement relative to N = {1, 2, 3, ...}."""

    inner: SetExpr

    def member(self, n: int) -> bool:
        return not self.inner.member(n)

    def children(self):
        return (self.inner,)

    def to_dsl(self) -> str:
        return f"compl({self.inner.to_dsl()})"


EVENS = ArithProg(2, 2)
ODDS = ArithProg(1, 2)


def interval(lo: int, hi: int) -> SetExpr:
    """The integer range [lo, hi] as a set expression."""
    if lo < 1 or hi < lo:
        raise ValueError(f"bad interval [{lo}, {hi}]")
    return Inter(Tail(lo), Compl(Tail(hi + 1)))


def member(s: SetExpr, n: int) -> bool:
    """True iff n lies in the denoted set."""
    return s.member(n)


def indicator(s: SetExpr, limit: int) -> np.ndarray:
    """Boolean membership array of length limit + 1; slot 0 is always False."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if isinstance(s, Finite):
        out = np.zeros(limit + 1, dtype=bool)
        vals = [v for v in s.values if v <= limit]
        if vals:
            out[np.asarray(vals)] = True
        return out
    if isinstance(s, ArithProg):
        out = np.zeros(limit + 1, dtype=bool)
        if s.first <= limit:
            out[s.first :: s.step] = True
        return out
    if isinstance(s, Tail):
        out = np.zeros(limit + 1, dtype=bool)
        if s.start <= limit:
            out[s.start :] = True
        return out
    if isinstance(s, IntervalSchedule):
        vals = s.gen.values_through(limit)
        jmax = len(vals) - 1  # intervals [vals[j-1], vals[j]) for j <= jmax
        out = np.zeros(limit + 1, dtype=bool)
        if jmax < 1:
            return out
        selected = indicator(s.selector, jmax)
        diff = np.zeros(limit + 2, dtype=np.int32)
        starts = np.asarray(vals[:jmax], dtype=np.int64)
        ends = np.minimum(np.asarray(vals[1 : jmax + 1], dtype=np.int64), limit + 1)
        mask = selected[1:] & (starts <= limit)
        np.add.at(diff, starts[mask], 1)
        np.add.at(diff, ends[mask], -1)
        out[1:] = np.cumsum(diff)[1 : limit + 1] > 0
        return out
    if isinstance(s, Union):
        return indicator(s.left, limit) | indicator(s.right, limit)
    if isinstance(s, Inter):
        return indicator(s.left, limit) & indicator(s.right, limit)
    if isinstance(s, Compl):
        out = ~indicator(s.inner, limit)
        out[0] = False
        return out
    raise TypeError(f"unknown expression {type(s).__name__}")


def prefix(s: SetExpr, limit: int) -> list[int]:
    """All members <= limit, strictly increasing."""
    return np.flatnonzero(indicator(s, limit)).tolist()


def count(s: SetExpr, limit: int) -> int:
    """Number of members <= limit."""
    return int(indicator(s, limit).sum())


def cumulative_counts(s: SetExpr, limit: int) -> np.ndarray:
    """Array c with c[n] = count(s, n) for 0 <= n <= limit."""
    return np.cumsum(indicator(s, limit))
