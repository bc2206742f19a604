"""Schemas: machines whose update constants are unknowns, and their systems."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..core import MARKER, Reg, Sst, Transition, Update, evaluate, runs, well_formed_inputs
from .equations import Clause, EqSystem, Equation, Unknown, canonical_conjunction


@dataclass(frozen=True)
class Schema:
    """``sst`` has :class:`Unknown` items in place of maximal constant factors."""

    sst: Sst
    phi: dict

    def unknowns(self) -> list:
        return sorted(self.phi)


def schema_of(sst: Sst, prefix: str = "U", side: str = "") -> Schema:
    """Replace every maximal run of letters in every image by a fresh unknown.

    Unknowns are numbered in transition order, then register order.
    """
    phi = {}
    transitions = []
    for t in sst.transitions:
        images = []
        for img in t.update.images:
            out = []
            for is_reg, group in itertools.groupby(img, key=lambda s: isinstance(s, Reg)):
                if is_reg:
                    out.extend(group)
                else:
                    x = Unknown(f"{prefix}{len(phi) + 1}", side)
                    phi[x] = "".join(group)
                    out.append(x)
            images.append(tuple(out))
        transitions.append(Transition(t.source, t.label, Update(t.update.registers, tuple(images)), t.target))
    return Schema(sst.replace(transitions=transitions), phi)


def concretize(schema: Schema, sigma=None) -> Sst:
    """Substitute values for the unknowns (``phi`` by default)."""
    sigma = schema.phi if sigma is None else sigma
    transitions = []
    for t in schema.sst.transitions:
        images = tuple(
            tuple(c for s in img for c in ((s,) if isinstance(s, Reg) else tuple(sigma[s]) if isinstance(s, Unknown) else (s,)))
            for img in t.update.images)
        transitions.append(Transition(t.source, t.label, Update(t.update.registers, images), t.target))
    return schema.sst.replace(transitions=transitions)


def symbolic_outputs(schema: Schema, u: str) -> list[tuple]:
    """Distinct output words, over unknowns and letters, of the runs on ``u``."""
    sst = schema.sst
    if any(a not in sst.input_alphabet for a in u):
        return []
    found = {}
    for run in runs(sst, u):
        val = {x: () for x in sst.registers}
        for t in run.steps:
            val = {x: tuple(c for s in img for c in (val[s.name] if isinstance(s, Reg) else (s,)))
                   for x, img in t.update.items()}
        found[val[sst.output_register]] = None
    return list(found)


def _partitions(items: list, k: int):
    """Set partitions of ``items`` into at most ``k`` blocks (restricted growth)."""
    def grow(i, blocks):
        if i == len(items):
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(items[i])
            yield from grow(i + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([items[i]])
            yield from grow(i + 1, blocks)
            blocks.pop()

    yield from grow(0, [])


def build_system(s1: Schema, s2: Schema, k: int, u: str) -> Clause:
    """Disjunction over ways of matching the outputs of both schemas on ``u``.

    Each block of a partition stands for one output value, so it must hold
    outputs of both machines; all words inside a block are equated. When
    exactly one machine accepts ``u`` the clause has no disjunct (false).
    """
    o1, o2 = symbolic_outputs(s1, u), symbolic_outputs(s2, u)
    if not o1 and not o2:
        return Clause(((),), u)
    if not o1 or not o2:
        return Clause((), u)
    items = [(1, w) for w in o1] + [(2, w) for w in o2]
    options = {}
    for blocks in _partitions(items, k):
        if any({side for side, _ in b} != {1, 2} for b in blocks):
            continue
        eqs = [Equation(b[0][1], w) for b in blocks for _, w in b[1:]]
        options[canonical_conjunction(eqs)] = None
    return Clause(tuple(options), u)


def input_letters(*machines) -> list[str]:
    return sorted({a for m in machines for a in m.input_alphabet} - {MARKER})


def system_upto(s1: Schema, s2: Schema, k: int, n: int) -> EqSystem:
    """Conjunction of :func:`build_system` over well formed inputs of length at most ``n``."""
    letters = input_letters(s1.sst, s2.sst)
    return EqSystem(tuple(build_system(s1, s2, k, u) for u in well_formed_inputs(letters, n)))


def joint_phi(s1: Schema, s2: Schema) -> dict:
    if set(s1.phi) & set(s2.phi) and s1 is not s2:
        raise ValueError("schemas share unknown names")
    return {**s1.phi, **s2.phi}


@dataclass(frozen=True)
class EquivReport:
    equivalent: bool
    witness: str | None = None
    outputs1: frozenset = frozenset()
    outputs2: frozenset = frozenset()


def _outputs(sst: Sst, u: str) -> frozenset:
    if any(a not in sst.input_alphabet for a in u):
        return frozenset()
    return evaluate(sst, u)


def equiv_bounded(t1: Sst, t2: Sst, n: int) -> EquivReport:
    """Same output sets on every well formed input of length at most ``n``?"""
    for u in well_formed_inputs(input_letters(t1, t2), n):
        a, b = _outputs(t1, u), _outputs(t2, u)
        if a != b:
            return EquivReport(False, u, a, b)
    return EquivReport(True)
