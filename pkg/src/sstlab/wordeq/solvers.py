"""Bounded exhaustive search and Nielsen rewriting for word equations."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .equations import EqSystem, Equation, Unknown, apply_assignment


class BudgetExceeded(RuntimeError):
    """The solver ran out of time before reaching a verdict."""


class Budget:
    def __init__(self, ms: int | None):
        self.deadline = None if ms is None else time.monotonic() + ms / 1000
        self.ticks = 0

    def tick(self) -> None:
        self.ticks += 1
        # Nielsen steps can grow the equations, so every tick checks the clock
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("solver budget exhausted")


def satisfies(sigma, system: EqSystem) -> bool:
    missing = [x for x in system.unknowns() if x not in sigma]
    if missing:
        raise KeyError(f"assignment misses unknowns {[str(x) for x in missing]}")
    return all(any(all(e.holds(sigma) for e in conj) for conj in c.options) for c in system.clauses)


def _values(alphabet, max_len: int) -> list[str]:
    """All words up to ``max_len`` in lexicographic order."""
    out = []

    def grow(w):
        out.append(w)
        if len(w) < max_len:
            for a in alphabet:
                grow(w + a)

    grow("")
    return out


def _refuted(eq: Equation, sigma) -> bool:
    """Do the known outer parts of the two sides already disagree?"""
    sides = []
    for word in (eq.left, eq.right):
        head, k = [], 0
        while k < len(word) and (not isinstance(word[k], Unknown) or word[k] in sigma):
            s = word[k]
            head.append(sigma[s] if isinstance(s, Unknown) else s)
            k += 1
        tail, j = [], len(word)
        while j > k and (not isinstance(word[j - 1], Unknown) or word[j - 1] in sigma):
            s = word[j - 1]
            tail.append(sigma[s] if isinstance(s, Unknown) else s)
            j -= 1
        sides.append(("".join(head), "".join(reversed(tail)), k == len(word)))
    (h1, t1, done1), (h2, t2, done2) = sides
    if done1 and done2:
        return h1 != h2
    n = min(len(h1), len(h2))
    if h1[:n] != h2[:n]:
        return True
    n = min(len(t1), len(t2))
    return n > 0 and t1[len(t1) - n:] != t2[len(t2) - n:]


def _possible(system: EqSystem, sigma) -> bool:
    return all(any(not any(_refuted(e, sigma) for e in conj) for conj in c.options) for c in system.clauses)


def solve_bounded(system: EqSystem, bound: int, alphabet=None, budget_ms: int | None = None) -> dict | None:
    """Least satisfying assignment with every value of length at most ``bound``.

    Assignments are ordered by total length, then lexicographically on the
    tuple of values (unknowns sorted by name). Returns ``None`` when no
    assignment within the bound works.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    alphabet = sorted(system.letters() if alphabet is None else alphabet)
    xs = system.unknowns()
    values = _values(alphabet, bound)
    budget = Budget(budget_ms)
    if any(not c.options for c in system.clauses):
        return None

    def search(i, sigma, left):
        budget.tick()
        if not _possible(system, sigma):
            return None
        if i == len(xs):
            return dict(sigma) if left == 0 and satisfies(sigma, system) else None
        rest = (len(xs) - i - 1) * bound
        for v in values:
            if len(v) > left or len(v) + rest < left:
                continue
            sigma[xs[i]] = v
            found = search(i + 1, sigma, left - len(v))
            del sigma[xs[i]]
            if found is not None:
                return found
        return None

    for total in range(len(xs) * bound + 1):
        found = search(0, {}, total)
        if found is not None:
            return found
    return None


@dataclass(frozen=True)
class NielsenResult:
    status: str  # "sat", "unsat" or "unknown"
    witness: dict | None = None
    explored: int = 0
    notes: list = field(default_factory=list)


def _subst(word, x: Unknown, image) -> tuple:
    out = []
    for s in word:
        if s == x:
            out.extend(image)
        else:
            out.append(s)
    return tuple(out)


def _simplify(eqs):
    """Strip common prefixes and suffixes; ``None`` on a visible clash."""
    out = set()
    for left, right in eqs:
        i = 0
        while i < min(len(left), len(right)) and left[i] == right[i]:
            i += 1
        left, right = left[i:], right[i:]
        j = 0
        while j < min(len(left), len(right)) and left[-1 - j] == right[-1 - j]:
            j += 1
        if j:
            left, right = left[:-j], right[:-j]
        if not left and not right:
            continue
        for a, b in ((left, right), (right, left)):
            if a and b and not isinstance(a[0], Unknown) and not isinstance(b[0], Unknown):
                return None
            if a and b and not isinstance(a[-1], Unknown) and not isinstance(b[-1], Unknown):
                return None
        if not left or not right:
            # an empty side forces every unknown of the other to be empty
            if any(not isinstance(s, Unknown) for s in left + right):
                return None
        key = tuple(sorted((left, right), key=lambda w: [(isinstance(s, Unknown), str(s)) for s in w]))
        out.add(key)
    return frozenset(out)


def _branches(eqs):
    """Nielsen substitutions for the least non-trivial equation."""
    left, right = min(eqs, key=lambda e: [[(isinstance(s, Unknown), str(s)) for s in w] for w in e])
    if not left or not right:
        x = next(s for s in left + right if isinstance(s, Unknown))
        return [(x, ())]
    x, y = left[0], right[0]
    if isinstance(x, Unknown) and isinstance(y, Unknown):
        return [(x, ()), (y, ()), (x, (y, x)), (y, (x, y))]
    if not isinstance(x, Unknown):
        x, y = y, x
    return [(x, ()), (x, (y, x))]


def solve_nielsen(equations, depth: int, budget_ms: int | None = None) -> NielsenResult:
    """Decide a conjunction of equations by Nielsen transformations.

    ``sat`` comes with a witness, ``unsat`` is definitive, and ``unknown``
    means some branch was cut at ``depth``. Revisiting a state on the
    current branch is pruned: along a branch that follows a least solution
    the total solution length strictly decreases, so it never cycles.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    start = _simplify((e.left, e.right) for e in equations)
    names = sorted({s for e in equations for w in (e.left, e.right) for s in w if isinstance(s, Unknown)})
    budget = Budget(budget_ms)
    dead: set = set()  # states proved unsatisfiable
    tried: dict = {}  # state -> largest remaining depth it was cut at
    explored = 0
    cut = looped = False

    def search(state, remaining, path, on_path):
        nonlocal explored, cut, looped
        if state is None or state in dead:
            return None
        if state in on_path:
            looped = True
            return None
        if not state:
            return list(path)
        if tried.get(state, -1) >= remaining:
            cut = True
            return None
        if remaining == 0:
            tried[state] = 0
            cut = True
            return None
        explored += 1
        budget.tick()
        outer = (cut, looped)
        cut = looped = False
        on_path.add(state)
        for x, image in _branches(state):
            nxt = _simplify((_subst(l, x, image), _subst(r, x, image)) for l, r in state)
            path.append((x, image))
            found = search(nxt, remaining - 1, path, on_path)
            path.pop()
            if found is not None:
                on_path.discard(state)
                return found
        on_path.discard(state)
        # a subtree cut short by an ancestor on the branch proves nothing alone
        if cut:
            tried[state] = remaining
        elif not looped:
            dead.add(state)
        cut, looped = cut or outer[0], looped or outer[1]
        return None

    try:
        path = search(start, depth, [], set())
    except BudgetExceeded:
        return NielsenResult("unknown", None, explored, ["budget exhausted"])
    if path is None:
        return NielsenResult("unknown" if cut else "unsat", None, explored)
    sigma = {x: "" for x in names}
    for x, image in reversed(path):
        sigma[x] = apply_assignment(image, sigma)
    return NielsenResult("sat", sigma, explored)
