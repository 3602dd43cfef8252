"""Exact analysis of eventually periodic subsets of the positive integers.

Boolean combinations of Finite, ArithProg and Tail are exactly the
eventually periodic sets, so they reduce to a normal form

    set = blocks  ∪  {n >= threshold : n mod period in residues}

with ``blocks`` a sorted tuple of disjoint half-open integer ranges below
the threshold.  Every classification question this package asks (finiteness,
natural density, parity of the tail, divergence of the reciprocal sum) is
decidable on the normal form.  Interval schedules over affine generators
reduce here too; geometric schedules do not and are handled by the bounds
layer in :mod:`idealgames.ideals`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import setexpr as sx

# Guards against pathological expressions blowing up the normal form.
MAX_PERIOD = 1_000_000
MAX_BLOCKS = 200_000


class TooComplex(Exception):
    """Normal form would exceed the configured size guards."""


def _merge_blocks(blocks: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    blocks = sorted((lo, hi) for lo, hi in blocks if hi > lo)
    out: list[tuple[int, int]] = []
    for lo, hi in blocks:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


def _complement_blocks(
    blocks: tuple[tuple[int, int], ...], lo: int, hi: int
) -> list[tuple[int, int]]:
    out = []
    cur = lo
    for b_lo, b_hi in blocks:
        if b_hi <= lo or b_lo >= hi:
            continue
        b_lo, b_hi = max(b_lo, lo), min(b_hi, hi)
        if cur < b_lo:
            out.append((cur, b_lo))
        cur = max(cur, b_hi)
    if cur < hi:
        out.append((cur, hi))
    return out


def _intersect_blocks(
    a: tuple[tuple[int, int], ...], b: tuple[tuple[int, int], ...]
) -> list[tuple[int, int]]:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo < hi:
            out.append((lo, hi))
        if a[i][1] <= b[j][1]:
            i += 1
        else:
            j += 1
    return out


@dataclass(frozen=True)
class Periodic:
    """Normal form of an eventually periodic set."""

    period: int
    residues: frozenset[int]
    threshold: int
    blocks: tuple[tuple[int, int], ...]

    def member(self, n: int) -> bool:
        if n >= self.threshold:
            return n % self.period in self.residues
        for lo, hi in self.blocks:
            if lo <= n < hi:
                return True
        return False

    @property
    def is_finite(self) -> bool:
        return not self.residues

    @property
    def is_cofinite(self) -> bool:
        return len(self.residues) == self.period

    def density(self) -> Fraction:
        """Natural density; exists for every eventually periodic set."""
        return Fraction(len(self.residues), self.period)

    def odd_part_finite(self) -> bool:
        """True iff the set meets the odd integers only finitely often."""
        p2 = self.period if self.period % 2 == 0 else 2 * self.period
        for r in range(p2):
            if r % 2 == 1 and (r % self.period) in self.residues:
                return False
        return True

    def reciprocal_sum_diverges(self) -> bool:
        """True iff sum(1/a) over the set diverges (iff the set is infinite)."""
        return bool(self.residues)

    def block_count(self) -> int:
        return sum(hi - lo for lo, hi in self.blocks)

    def tail_reciprocal_upper(self, horizon: int) -> float | None:
        """Certified upper bound on sum(1/a) over members > horizon.

        Only finite sets have a certificate; infinite eventually periodic
        sets contain a progression and diverge.
        """
        if self.residues:
            return None
        total = 0.0
        for lo, hi in self.blocks:
            lo = max(lo, horizon + 1)
            if lo >= hi:
                continue
            if hi - lo <= 4096:
                total += sum(1.0 / i for i in range(lo, hi))
            else:
                # sum_{i=lo}^{hi-1} 1/i <= 1/lo + ln((hi-1)/lo)
                total += 1.0 / lo + math.log((hi - 1) / lo)
        return total


def _rebase(p: Periodic, period: int, threshold: int) -> Periodic:
    """Re-express with the given (coarser) period and (larger) threshold."""
    if period % p.period:
        raise ValueError("new period must be a multiple")
    residues = frozenset(
        r for r in range(period) if (r % p.period) in p.residues
    )
    blocks = list(p.blocks)
    if threshold > p.threshold and p.is_cofinite:
        blocks.append((p.threshold, threshold))
    elif threshold > p.threshold and p.residues:
        if threshold - p.threshold > 2_000_000:
            raise TooComplex("periodic stretch too wide to explicate")
        run_start = None
        for n in range(p.threshold, threshold):
            if n % p.period in p.residues:
                if run_start is None:
                    run_start = n
            elif run_start is not None:
                blocks.append((run_start, n))
                run_start = None
        if run_start is not None:
            blocks.append((run_start, threshold))
    merged = _merge_blocks(blocks)
    if len(merged) > MAX_BLOCKS:
        raise TooComplex("too many blocks")
    return Periodic(period, residues, threshold, merged)


def _combine(a: Periodic, b: Periodic, op: str) -> Periodic:
    period = math.lcm(a.period, b.period)
    if period > MAX_PERIOD:
        raise TooComplex(f"period {period} over cap")
    threshold = max(a.threshold, b.threshold)
    ra = _rebase(a, period, threshold)
    rb = _rebase(b, period, threshold)
    if op == "union":
        residues = ra.residues | rb.residues
        blocks = _merge_blocks(list(ra.blocks) + list(rb.blocks))
    else:
        residues = ra.residues & rb.residues
        blocks = tuple(_intersect_blocks(ra.blocks, rb.blocks))
    return Periodic(period, frozenset(residues), threshold, blocks)


def _complement(a: Periodic) -> Periodic:
    residues = frozenset(set(range(a.period)) - a.residues)
    blocks = tuple(_complement_blocks(a.blocks, 1, a.threshold))
    return Periodic(a.period, residues, a.threshold, blocks)


def _selected_below_threshold(sel: Periodic) -> list[int]:
    return [j for lo, hi in sel.blocks for j in range(lo, hi)]


def _from_schedule(s: sx.IntervalSchedule) -> Periodic | None:
    sel = reduce(s.selector)
    if sel is None:
        return None
    if sel.is_finite:
        # Finite union of concrete generator blocks, kept as ranges so the
        # values may be astronomically large without expansion.
        blocks = _merge_blocks(
            [(s.gen.value(j), s.gen.value(j + 1)) for j in _selected_below_threshold(sel)]
        )
        threshold = blocks[-1][1] if blocks else 1
        return Periodic(1, frozenset(), threshold, blocks)
    if sel.is_cofinite:
        # Consecutive generator blocks tile, so the selection covers a full
        # tail of N starting at value(sel.threshold).
        blocks = _merge_blocks(
            [(s.gen.value(j), s.gen.value(j + 1)) for j in _selected_below_threshold(sel)]
        )
        return Periodic(1, frozenset({0}), s.gen.value(sel.threshold), blocks)
    if s.gen.affine is None:
        return None
    a, b = s.gen.affine
    # Block for index j is [a*j + b, a*j + a + b): an affine image, so the
    # union over a periodic index set is again eventually periodic.
    period = a * sel.period
    residues = set()
    for r in range(sel.period):
        if r in sel.residues:
            base = a * r + b
            for off in range(a):
                residues.add((base + off) % period)
    threshold = max(1, a * sel.threshold + b)
    blocks = _merge_blocks(
        [
            (max(1, a * j + b), a * j + a + b)
            for j in _selected_below_threshold(sel)
        ]
    )
    return Periodic(period, frozenset(residues), threshold, blocks)


def reduce(s: sx.SetExpr) -> Periodic | None:
    """Normal form of s, or None when s is not eventually periodic.

    Raises TooComplex when the expression is eventually periodic but the
    normal form would exceed the size guards.
    """
    if isinstance(s, sx.Finite):
        blocks = _merge_blocks([(v, v + 1) for v in s.values])
        threshold = blocks[-1][1] if blocks else 1
        return Periodic(1, frozenset(), threshold, blocks)
    if isinstance(s, sx.ArithProg):
        return Periodic(
            s.step, frozenset({s.first % s.step}), s.first, ()
        )
    if isinstance(s, sx.Tail):
        return Periodic(1, frozenset({0}), s.start, ())
    if isinstance(s, sx.IntervalSchedule):
        return _from_schedule(s)
    if isinstance(s, sx.Union):
        left, right = reduce(s.left), reduce(s.right)
        if left is None or right is None:
            return None
        return _combine(left, right, "union")
    if isinstance(s, sx.Inter):
        left, right = reduce(s.left), reduce(s.right)
        if left is None or right is None:
            return None
        return _combine(left, right, "inter")
    if isinstance(s, sx.Compl):
        inner = reduce(s.inner)
        return None if inner is None else _complement(inner)
    raise TypeError(f"unknown expression {type(s).__name__}")
