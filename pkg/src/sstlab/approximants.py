"""Gap valuations and annotation of states with approximants.

Gaps ``y0 .. ym`` hold the output text that the rest of a run places
around the registers: ``y0 x1 y1 ... xm ym`` evaluates to the final
output at every position of a successful run of a flow-normalized machine.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import Reg, Run, Sst, Transition, Update, compose_all, state_key, successful_runs_by_input, trim
from .lattice import EPSILON, ApproxLang, closure_subst, closure_word
from .normalize import is_non_erasing, is_non_permuting


@dataclass(frozen=True, order=True)
class Gap:
    index: int

    def __str__(self) -> str:
        return f"y{self.index}"


def require_normalized(f: Update) -> None:
    if not (is_non_erasing(f) and is_non_permuting(f)):
        raise ValueError(f"update {f} is not non-erasing and non-permuting")


def effect_word(f: Update) -> tuple:
    """``y0 f(x1) y1 ... f(xm) ym`` as a tuple of gaps, registers and letters."""
    out = [Gap(0)]
    for j, img in enumerate(f.images, start=1):
        out.extend(img)
        out.append(Gap(j))
    return tuple(out)


def gap_extract(w, i: int, registers) -> tuple:
    """Factor of ``w`` strictly between registers ``x_i`` and ``x_{i+1}``.

    ``i = 0`` gives the prefix before ``x_1``; an absent ``x_i`` gives the
    empty word; an absent ``x_{i+1}`` gives the suffix after ``x_i``.
    """
    w = tuple(w)
    pos = {s.name: k for k, s in enumerate(w) if isinstance(s, Reg)}
    occ = [s.name for s in w if isinstance(s, Reg)]
    if occ != list(registers[: len(occ)]):
        raise ValueError("registers must occur once each, as a prefix of the register order")
    if not 0 <= i <= len(registers):
        raise ValueError(f"gap index {i} out of range")
    if i == 0:
        end = pos.get(registers[0], len(w)) if registers else len(w)
        return w[:end]
    left = registers[i - 1]
    if left not in pos:
        return ()
    right = registers[i] if i < len(registers) else None
    end = pos.get(right, len(w)) if right is not None else len(w)
    return w[pos[left] + 1: end]


@dataclass(frozen=True)
class GapUpdate:
    """Backward update of the gaps; ``images[j]`` is the new content of ``y_j``."""

    images: tuple

    def __getitem__(self, j: int) -> tuple:
        return self.images[j]

    def __str__(self) -> str:
        return "{" + "; ".join(f"y{j} := {' '.join(map(str, img)) or 'ε'}" for j, img in enumerate(self.images)) + "}"


def gap_update(f: Update) -> GapUpdate:
    require_normalized(f)
    eff = effect_word(f)
    return GapUpdate(tuple(gap_extract(eff, j, f.registers) for j in range(len(f.registers) + 1)))


def update_from_gaps(g: GapUpdate, registers) -> Update:
    """Recover the register update whose gap update is ``g``."""
    eff = list(g[0])
    for j, x in enumerate(registers, start=1):
        eff.append(Reg(x))
        eff.extend(g[j])
    pos = {s.index: k for k, s in enumerate(eff) if isinstance(s, Gap)}
    images = tuple(tuple(eff[pos[j - 1] + 1: pos[j]]) for j in range(1, len(registers) + 1))
    return Update(tuple(registers), images)


def gap_valuation(run: Run, i: int) -> dict[int, str]:
    """Gap contents at position ``i`` of a successful run."""
    if not 0 <= i <= len(run.steps):
        raise IndexError(f"position {i} outside a run of length {len(run.steps)}")
    rest = compose_all((t.update for t in run.steps[i:]), run.registers)
    chi = tuple(s for img in rest.images for s in img)
    return {j: "".join(gap_extract(chi, j, run.registers)) for j in range(len(run.registers) + 1)}


@dataclass(frozen=True, eq=True)
class AnnotatedState:
    """A state paired with approximants of its registers and gaps."""

    base: object
    ax: tuple
    ay: tuple

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.base, self.ax, self.ay)))

    def __hash__(self) -> int:
        return self._hash

    def describe(self) -> str:
        xs = ", ".join(f"x{i + 1}:{a}" for i, a in enumerate(self.ax))
        ys = ", ".join(f"y{j}:{a}" for j, a in enumerate(self.ay))
        return f"{state_key(self.base)} | {xs} | {ys}"

    def lookup(self, registers) -> dict:
        table = {Reg(x): a for x, a in zip(registers, self.ax)}
        table.update({Gap(j): a for j, a in enumerate(self.ay)})
        return table


class AnnotationTooLarge(RuntimeError):
    """The annotated machine would exceed the requested number of states."""


def _check_size(seen, limit):
    if limit is not None and len(seen) > limit:
        raise AnnotationTooLarge(f"more than {limit} annotated states")


def _forward(sst: Sst, alpha: int, limit=None):
    start = tuple(EPSILON for _ in sst.registers)
    todo = [(q, start) for q in sst.initial]
    seen = set(todo)
    edges = {}
    while todo:
        q, ax = todo.pop()
        table = {Reg(x): a for x, a in zip(sst.registers, ax)}
        for t in sst.outgoing(q):
            nxt = tuple(closure_subst(table, img, alpha) for img in t.update.images)
            edges.setdefault(t, set()).add((ax, nxt))
            if (t.target, nxt) not in seen:
                seen.add((t.target, nxt))
                todo.append((t.target, nxt))
                _check_size(seen, limit)
    return edges


def _backward(sst: Sst, alpha: int, gap_updates, limit=None):
    start = tuple(EPSILON for _ in range(sst.m + 1))
    todo = [(q, start) for q in sst.final]
    seen = set(todo)
    edges = {}
    while todo:
        q, ay = todo.pop()
        table = {Gap(j): a for j, a in enumerate(ay)}
        for t in sst.incoming(q):
            prev = tuple(closure_subst(table, img, alpha) for img in gap_updates[t].images)
            edges.setdefault(t, set()).add((prev, ay))
            if (t.source, prev) not in seen:
                seen.add((t.source, prev))
                todo.append((t.source, prev))
                _check_size(seen, limit)
    return edges


def annotate_approximants(sst: Sst, alpha: int, max_states: int | None = None) -> Sst:
    """Covering whose states carry the closures of register and gap contents.

    ``max_states`` bounds each of the forward and backward explorations and
    raises :class:`AnnotationTooLarge` when exceeded.
    """
    for t in sst.transitions:
        require_normalized(t.update)
    sst = trim(sst)
    gaps = {t: gap_update(t.update) for t in sst.transitions}
    fwd = _forward(sst, alpha, max_states)
    bwd = _backward(sst, alpha, gaps, max_states)
    transitions = []
    for t in sst.transitions:
        for ax, ax2 in fwd.get(t, ()):
            for ay, ay2 in bwd.get(t, ()):
                transitions.append(Transition(
                    AnnotatedState(t.source, ax, ay), t.label, t.update, AnnotatedState(t.target, ax2, ay2)))
    states = {s for t in transitions for s in (t.source, t.target)}
    eps_x = tuple(EPSILON for _ in sst.registers)
    eps_y = tuple(EPSILON for _ in range(sst.m + 1))
    # machines accepting with no transitions are excluded by the marker discipline
    result = sst.replace(
        states=states,
        initial={s for s in states if s.base in sst.initial and s.ax == eps_x},
        final={s for s in states if s.base in sst.final and s.ay == eps_y},
        transitions=transitions,
    )
    return trim(result)


def register_closures(valuation, registers, alpha: int) -> tuple:
    return tuple(closure_word(valuation[x], alpha) for x in registers)


@dataclass(frozen=True)
class AdmitsReport:
    ok: bool
    run: Run | None = None
    position: int | None = None
    detail: str = ""


def check_admits(sst: Sst, alpha: int, max_len: int) -> AdmitsReport:
    """Compare state annotations with actual closures on all short successful runs."""
    regs = sst.registers
    for run in successful_runs_by_input(sst, max_len):
        vals = [{x: "" for x in regs}]
        for t in run.steps:
            prev = vals[-1]
            vals.append({x: "".join(prev[s.name] if isinstance(s, Reg) else s for s in img)
                         for x, img in t.update.items()})
        for i, q in enumerate(run.states):
            if not isinstance(q, AnnotatedState):
                raise ValueError("machine states carry no approximants")
            ax = register_closures(vals[i], regs, alpha)
            if ax != q.ax:
                return AdmitsReport(False, run, i, f"registers {[str(a) for a in ax]} vs {[str(a) for a in q.ax]}")
            gv = gap_valuation(run, i)
            ay = tuple(closure_word(gv[j], alpha) for j in range(len(regs) + 1))
            if ay != q.ay:
                return AdmitsReport(False, run, i, f"gaps {[str(a) for a in ay]} vs {[str(a) for a in q.ay]}")
    return AdmitsReport(True)


def tightness_probe(sst: Sst, alpha: int, beta: int | None = None, max_len: int = 6, max_pump: int = 6) -> dict:
    """For each annotated state, look for pumped runs whose ``beta``-closures match.

    Returns ``{state: (register_part_found, gap_part_found)}`` over the states
    visited by successful runs of length at most ``max_len``.
    """
    from .core import find_loops, pump, register_valuation

    beta = 2 * alpha if beta is None else beta

    def regs_match(r, at, q):
        return register_closures(register_valuation(r, at), sst.registers, beta) == q.ax

    def gaps_match(r, at, q):
        gv = gap_valuation(r, at)
        return tuple(closure_word(gv[j], beta) for j in range(sst.m + 1)) == q.ay

    found: dict = {}
    for run in successful_runs_by_input(sst, max_len):
        loops = find_loops(run)
        for i, q in enumerate(run.states):
            have = found.setdefault(q, [False, False])
            have[0] = have[0] or regs_match(run, i, q)
            have[1] = have[1] or gaps_match(run, i, q)
            for lo, hi in loops:
                if all(have):
                    break
                for n in range(2, max_pump + 1):
                    pumped = pump(run, [(lo, hi)], n)
                    if hi <= i and not have[0]:
                        have[0] = regs_match(pumped, i + (n - 1) * (hi - lo), q)
                    if lo >= i and not have[1]:
                        have[1] = gaps_match(pumped, i, q)
    return {q: tuple(v) for q, v in found.items()}
