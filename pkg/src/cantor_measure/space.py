"""Cantor space plumbing: cylinders, clopen sets, points, staged open sets.

Finite binary strings are plain Python str over '0'/'1'; the empty string is
the root cylinder (the whole space).  A clopen set is held as its canonical
prefix-free generator antichain, so equality is syntactic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .dyadic import Dyadic, ZERO
from .errors import ValidationError

Bits = str


def validate_bits(p: str) -> str:
    if any(ch not in "01" for ch in p):
        raise ValidationError(f"not a binary string: {p!r}")
    return p


def prefix_free_normalize(gens: Iterable[str]) -> tuple[str, ...]:
    """Canonical antichain with the same union of cylinders.

    Prefix absorption first (a generator kills its extensions), then sibling
    merge to a fixpoint: p0 and p1 both present collapse to p.  The result is
    sorted; {""} denotes the whole space, () the empty set.
    """
    kept: set[str] = set()
    for p in sorted(set(gens), key=len):
        validate_bits(p)
        if not any(p.startswith(q) for q in kept if len(q) <= len(p)):
            kept.add(p)
    # sibling merges never re-create prefix violations on an antichain
    work = sorted(kept, key=len, reverse=True)
    while work:
        p = work.pop(0)
        if p not in kept or not p:
            continue
        sib = p[:-1] + ("1" if p[-1] == "0" else "0")
        if sib in kept:
            kept.discard(p)
            kept.discard(sib)
            kept.add(p[:-1])
            work.insert(0, p[:-1])
    return tuple(sorted(kept))


@dataclass(frozen=True, slots=True)
class ClopenSet:
    """Finite union of cylinders, stored as the canonical antichain."""

    generators: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", prefix_free_normalize(self.generators))

    @classmethod
    def empty(cls) -> "ClopenSet":
        return cls(())

    @classmethod
    def full(cls) -> "ClopenSet":
        return cls(("",))

    @classmethod
    def cylinder(cls, p: str) -> "ClopenSet":
        return cls((validate_bits(p),))

    def is_empty(self) -> bool:
        return not self.generators

    def is_full(self) -> bool:
        return self.generators == ("",)

    def depth(self) -> int:
        return max((len(p) for p in self.generators), default=0)

    @property
    def mu(self) -> Dyadic:
        return mu_I(self)

    def covers_prefix(self, p: str) -> bool:
        """Whole cylinder [p] inside the set (membership decided by a generator
        at or above p, or by the generators below p covering it)."""
        return clopen_intersection(self, ClopenSet.cylinder(p)) == ClopenSet.cylinder(p)

    def contains_prefix_point(self, p: str) -> bool:
        """Some generator is a prefix of p (decides membership of any x in [p]
        when len(p) >= depth)."""
        return any(p.startswith(g) for g in self.generators)


def mu_I(s: ClopenSet) -> Dyadic:
    """Intensional measure: sum of 2^-|p| over the canonical antichain."""
    if s.is_empty():
        return ZERO
    d = s.depth()
    return Dyadic(sum(1 << (d - len(p)) for p in s.generators), d)


def clopen_union(*sets: ClopenSet) -> ClopenSet:
    return ClopenSet(tuple(itertools.chain.from_iterable(s.generators for s in sets)))


def clopen_intersection(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    out = []
    for p in a.generators:
        for q in b.generators:
            if q.startswith(p):
                out.append(q)
            elif p.startswith(q):
                out.append(p)
    return ClopenSet(tuple(out))


def clopen_complement(a: ClopenSet) -> ClopenSet:
    out: list[str] = []

    def walk(prefix: str) -> None:
        if any(prefix.startswith(g) for g in a.generators):
            return
        if not any(g.startswith(prefix) for g in a.generators):
            out.append(prefix)
            return
        walk(prefix + "0")
        walk(prefix + "1")

    walk("")
    return ClopenSet(tuple(out))


def clopen_subset(a: ClopenSet, b: ClopenSet) -> bool:
    return clopen_intersection(a, b) == a


def clopen_algebra(op: str, *sets: ClopenSet) -> ClopenSet:
    """Dispatch by name; kept for callers that carry the operation as data."""
    if op == "union":
        return clopen_union(*sets)
    if op == "intersection":
        a, b = sets
        return clopen_intersection(a, b)
    if op == "complement":
        (a,) = sets
        return clopen_complement(a)
    raise ValidationError(f"unknown clopen op {op!r}")


# ---------------------------------------------------------------------------
# points

_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _splitmix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def seeded_bit(seed: int, n: int) -> int:
    """Pure function of (seed, position); no hidden state, safe to share."""
    return _splitmix((seed + (n + 1) * _GOLDEN) & _MASK) >> 63


class Point:
    """Infinite binary sequence exposed one bit at a time."""

    def bit(self, n: int) -> int:
        raise NotImplementedError

    def prefix(self, d: int) -> str:
        return "".join(str(self.bit(i)) for i in range(d))

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class EventuallyPeriodicPoint(Point):
    head: str
    period: str

    def __post_init__(self):
        validate_bits(self.head)
        validate_bits(self.period)
        if not self.period:
            raise ValidationError("period must be nonempty")

    def bit(self, n: int) -> int:
        if n < len(self.head):
            return int(self.head[n])
        return int(self.period[(n - len(self.head)) % len(self.period)])

    def describe(self) -> str:
        return f"u={self.head}:v={self.period}"


@dataclass(frozen=True)
class SeededPoint(Point):
    seed: int

    def bit(self, n: int) -> int:
        return seeded_bit(self.seed, n)

    def describe(self) -> str:
        return f"seed={self.seed}"


@dataclass(frozen=True)
class TailPoint(Point):
    head: str
    base: Point

    def __post_init__(self):
        validate_bits(self.head)

    def bit(self, n: int) -> int:
        if n < len(self.head):
            return int(self.head[n])
        return self.base.bit(n - len(self.head))

    def describe(self) -> str:
        return f"{self.head}~{self.base.describe()}"


@dataclass(frozen=True)
class ColumnPoint(Point):
    base: Point
    index: int

    def bit(self, n: int) -> int:
        return self.base.bit(cantor_pair(self.index, n))

    def describe(self) -> str:
        return f"{self.base.describe()}[{self.index}]"


def cantor_pair(k: int, n: int) -> int:
    return (k + n) * (k + n + 1) // 2 + n


def column(x: Point, k: int) -> Point:
    if k < 0:
        raise ValidationError("column index must be nonnegative")
    return ColumnPoint(x, k)


def tail_append(p: str, x: Point) -> Point:
    return TailPoint(p, x)


def point_in(x: Point, s: ClopenSet) -> bool:
    """Reads at most max-generator-length bits of x."""
    if s.is_empty():
        return False
    seen = ""
    for depth in range(s.depth() + 1):
        for g in s.generators:
            if len(g) == depth and seen == g:
                return True
        if depth < s.depth():
            seen += str(x.bit(depth))
    return False


def enumerate_eventually_periodic(max_head: int, max_period: int) -> Iterator[EventuallyPeriodicPoint]:
    """All u v^w with |u| <= max_head, 1 <= |v| <= max_period."""
    for hl in range(max_head + 1):
        for head_bits in itertools.product("01", repeat=hl):
            for pl in range(1, max_period + 1):
                for per_bits in itertools.product("01", repeat=pl):
                    yield EventuallyPeriodicPoint("".join(head_bits), "".join(per_bits))


# ---------------------------------------------------------------------------
# staged open sets

@dataclass
class StagedOpenSet:
    """Monotone staged enumeration of an open set.

    stage(s) is a clopen set; each stage must cover every earlier one.  Beyond
    the last entry a list-backed set stays constant.  The optional tail budget
    bounds how much measure later stages may still add.
    """

    stages: Sequence[ClopenSet] | Callable[[int], ClopenSet]
    tail_budget: Callable[[int], Dyadic] | None = None
    _memo: list[ClopenSet] = field(default_factory=list, repr=False)

    def stage(self, s: int) -> ClopenSet:
        if s < 0:
            raise ValidationError("stage must be nonnegative")
        while len(self._memo) <= s:
            i = len(self._memo)
            if callable(self.stages):
                cur = self.stages(i)
            elif i < len(self.stages):
                cur = self.stages[i]
            elif self.stages:
                cur = self.stages[-1]
            else:
                cur = ClopenSet.empty()
            if self._memo and not clopen_subset(self._memo[-1], cur):
                raise ValidationError(f"stage {i} does not extend stage {i - 1}")
            self._memo.append(cur)
        return self._memo[s]

    def measure_bounds(self, s: int):
        from .dyadic import DyadicInterval

        lo = mu_I(self.stage(s))
        hi = lo + self.tail_budget(s) if self.tail_budget is not None else lo
        return DyadicInterval(lo, hi)

    @classmethod
    def constant(cls, c: ClopenSet) -> "StagedOpenSet":
        return cls(stages=[c])
