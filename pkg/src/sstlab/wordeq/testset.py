"""Checking whether one more input length adds constraints to a system."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .equations import EqSystem
from .schema import Schema, system_upto
from .solvers import Budget, BudgetExceeded, _values, satisfies


@dataclass(frozen=True)
class TestsetReport:
    verdict: str  # "fixpoint", "not-fixpoint" or "unknown"
    witness: dict | None = None
    checked: int = 0
    system_n: EqSystem | None = None
    system_next: EqSystem | None = None


def testset_fixpoint(s1: Schema, s2: Schema, k: int, n: int, bound: int,
                     alphabet=None, budget_ms: int | None = None) -> TestsetReport:
    """Does every assignment (values up to ``bound``) satisfying the length-``n``
    system also satisfy the length-``n+1`` one?

    A bounded search: ``fixpoint`` here does not certify the unbounded claim.
    Passing the same schema twice shares its unknowns between the sides.
    """
    sn = system_upto(s1, s2, k, n).simplified()
    snext = system_upto(s1, s2, k, n + 1).simplified()
    extra = EqSystem(tuple(c for c in snext.clauses if c not in sn.clauses))
    if not extra.clauses:
        return TestsetReport("fixpoint", None, 0, sn, snext)
    if alphabet is None:
        alphabet = sorted(set(s1.sst.output_alphabet) | set(s2.sst.output_alphabet))
    xs = sorted(set(sn.unknowns()) | set(extra.unknowns()))
    values = _values(sorted(alphabet), bound)
    budget = Budget(budget_ms)
    checked = 0
    try:
        for combo in itertools.product(values, repeat=len(xs)):
            budget.tick()
            sigma = dict(zip(xs, combo))
            checked += 1
            if satisfies(sigma, sn) and not satisfies(sigma, extra):
                return TestsetReport("not-fixpoint", sigma, checked, sn, snext)
    except BudgetExceeded:
        return TestsetReport("unknown", None, checked, sn, snext)
    return TestsetReport("fixpoint", None, checked, sn, snext)
