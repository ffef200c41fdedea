"""Rapidly null G-delta tests: level sequences of staged open sets with the
budget mu_I(level n, any stage) <= 2^-n, enforced at materialization.

Combining countably many tests into one uses the level shift n + j + 1: the
output's level j unions input n's level n+j+1, so the budget telescopes to
2^-j.  The countable union is kept finite per stage by the diagonal schedule
(inputs n <= stage index enter)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .dyadic import Dyadic
from .errors import BudgetError, ValidationError
from .space import ClopenSet, Point, StagedOpenSet, clopen_subset, clopen_union, mu_I, point_in


@dataclass(frozen=True)
class AvoidsSoFar:
    """No inspected stage captured the point; says nothing beyond them."""

    level: int
    stage: int


@dataclass(frozen=True)
class CapturedAt:
    level: int
    stage: int
    cylinder: str


class RapidGDelta:
    """levels(n) yields the staged open set U_n; every stage access is
    budget-checked, so no materialization path can observe a stage whose
    measure exceeds 2^-n without raising BudgetError."""

    def __init__(self, levels: Callable[[int], StagedOpenSet] | Sequence[StagedOpenSet],
                 label: str = "test"):
        self._rule = levels if callable(levels) else None
        self._fixed = None if callable(levels) else list(levels)
        self._memo: dict[int, StagedOpenSet] = {}
        self.label = label

    def level(self, n: int) -> StagedOpenSet:
        if n < 0:
            raise ValidationError("level must be nonnegative")
        if n not in self._memo:
            if self._fixed is not None:
                if n >= len(self._fixed):
                    raise ValidationError(f"{self.label} has only {len(self._fixed)} levels")
                self._memo[n] = self._fixed[n]
            else:
                self._memo[n] = self._rule(n)
        return self._memo[n]

    @property
    def level_count(self) -> int | None:
        return None if self._fixed is None else len(self._fixed)

    def stage(self, n: int, s: int) -> ClopenSet:
        c = self.level(n).stage(s)
        m = mu_I(c)
        if m > Dyadic.pow2(-n):
            raise BudgetError(
                f"{self.label}: level {n} stage {s} has measure {m} > 2^-{n}"
            )
        return c


def combine(tests: Sequence[RapidGDelta], schedule_bound: int | None = None,
            label: str = "combined") -> RapidGDelta:
    """One test whose G-delta contains every input's.

    Output level j at stage s unions input n's level n+j+1 at stage s over
    all n <= min(schedule_bound, s) present in the input list."""
    tests = list(tests)
    cap = len(tests) - 1 if schedule_bound is None else min(schedule_bound, len(tests) - 1)

    def level_rule(j: int) -> StagedOpenSet:
        def stage_rule(s: int) -> ClopenSet:
            parts = [tests[n].stage(n + j + 1, s) for n in range(min(cap, s) + 1)]
            return clopen_union(*parts) if parts else ClopenSet.empty()

        return StagedOpenSet(stages=stage_rule)

    return RapidGDelta(level_rule, label=label)


def avoids(x: Point, t: RapidGDelta, level: int, stage: int) -> AvoidsSoFar | CapturedAt:
    """Three-valued by stage: capture is final, avoidance only provisional."""
    c = t.stage(level, stage)
    for g in c.generators:
        if all(x.bit(i) == int(g[i]) for i in range(len(g))):
            return CapturedAt(level, stage, g)
    return AvoidsSoFar(level, stage)


def budget_report(t: RapidGDelta, level: int, stage: int) -> Dyadic:
    """Exact stage measure; raises BudgetError if above 2^-level."""
    return mu_I(t.stage(level, stage))


def covered_cell_count(stage_set: ClopenSet, k: int) -> int:
    """How many of the 2^k depth-k cells lie entirely inside the stage.

    mu-bounded stages cover at most mu * 2^k of them, which is the finite
    echo of 'a rapidly null set is not everything'."""
    count = 0
    for i in range(1 << k):
        p = format(i, f"0{k}b") if k else ""
        if stage_set.contains_prefix_point(p) or stage_set.covers_prefix(p):
            count += 1
    return count


def eventually_periodic_avoider(stage_set: ClopenSet):
    """An explicit eventually periodic point outside a non-full clopen stage."""
    from .space import EventuallyPeriodicPoint, clopen_complement

    comp = clopen_complement(stage_set)
    if comp.is_empty():
        raise ValidationError("stage covers the whole space; no avoider exists")
    g = comp.generators[0]
    return EventuallyPeriodicPoint(g, "0")
