"""Left quotients by letters and words via shortcut transitions.

The machine for ``a`` behaves on ``v`` as the original does on ``a v``.
States, registers and any state annotations are kept as they are.
"""
from __future__ import annotations

from dataclasses import dataclass

from .approximants import AnnotatedState
from .core import MARKER, Sst, Transition, compose_updates, trim
from .equivalence import prune_edges


@dataclass(frozen=True, order=True)
class FreshStart:
    """Copy of an initial state that no transition enters."""

    of: object

    def describe(self) -> str:
        return f"start copy of {self.of}"


def _fresh(q):
    if isinstance(q, AnnotatedState):
        return AnnotatedState(FreshStart(q.base), q.ax, q.ay)
    return FreshStart(q)


def is_transient(sst: Sst) -> bool:
    return not any(t.target in sst.initial for t in sst.transitions)


def make_initials_transient(sst: Sst) -> Sst:
    if is_transient(sst):
        return sst
    copies = {q: _fresh(q) for q in sst.initial}
    extra = [Transition(copies[t.source], t.label, t.update, t.target)
             for t in sst.transitions if t.source in copies]
    return sst.replace(
        states=set(sst.states) | set(copies.values()),
        initial=set(copies.values()),
        final=set(sst.final) | {c for q, c in copies.items() if q in sst.final},
        transitions=list(sst.transitions) + extra,
    )


def quotient_letter(sst: Sst, a: str) -> Sst:
    """Shortcut machine: initial states read ``a`` and the next letter at once."""
    if a == MARKER:
        raise ValueError("cannot take the quotient by the end marker")
    if a not in sst.input_alphabet:
        raise ValueError(f"letter {a!r} is not in the input alphabet")
    if not is_transient(sst):
        raise ValueError("initial states must not be entered by transitions")
    shortcuts = [
        Transition(first.source, second.label, compose_updates(first.update, second.update), second.target)
        for q0 in sst.initial
        for first in sst.step(q0, a)
        for second in sst.outgoing(first.target)
    ]
    kept = [t for t in sst.transitions if t.source not in sst.initial]
    return sst.replace(transitions=kept + shortcuts)


def quotient_word(sst: Sst, u: str, prune_dead: bool = False) -> Sst:
    for a in u:
        sst = quotient_letter(sst, a)
    return trim(sst) if prune_dead else sst


def quotient_prune(sst: Sst, u: str, k: int, prune_dead: bool = False) -> Sst:
    return prune_edges(quotient_word(sst, u, prune_dead), k)
