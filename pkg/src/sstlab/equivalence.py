"""Deciding when two parallel transitions are interchangeable, and pruning.

Two transitions with the same flow are compared through their effect words
``y0 f(x1) y1 ... f(xm) ym``: they are interchangeable when the two words
agree for every register value allowed at the source and every gap value
allowed at the target.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

from .approximants import AnnotatedState, Gap, effect_word, require_normalized
from .core import Reg, Run, Sst, Transition, apply_update, compose_all, flow_of, successful_runs_by_input
from .lattice import ApproxLang, has_period, periodic, primitive_root


def eff(f) -> tuple:
    require_normalized(f)
    return effect_word(f)


def _substitute_singletons(word, langs) -> list:
    out = []
    for s in word:
        if isinstance(s, str):
            out.append(s)
        elif langs[s].kind == "single":
            out.extend(langs[s].word)
        else:
            out.append(s)
    return out


def _split(word):
    """Leading constant letters and the position of the first variable."""
    k = 0
    while k < len(word) and isinstance(word[k], str):
        k += 1
    return "".join(word[:k]), k


def equation_valid(left, right, langs, alphabet=None) -> bool:
    """Does ``left = right`` hold for every choice of variable values?

    Both sides must mention the same variables in the same order, each once.
    ``langs`` maps variables to non-empty lattice elements.
    """
    left = _substitute_singletons(left, langs)
    right = _substitute_singletons(right, langs)
    while True:
        s1, k1 = _split(left)
        s2, k2 = _split(right)
        if k1 == len(left) or k2 == len(right):
            if k1 != len(left) or k2 != len(right):
                raise ValueError("sides mention different variables")
            return s1 == s2
        z = left[k1]
        if right[k2] != z:
            raise ValueError("sides mention variables in different orders")
        if s1 == s2:
            left, right = left[k1 + 1:], right[k2 + 1:]
            continue
        if s2.startswith(s1):
            offset, swap = s2[len(s1):], False
        elif s1.startswith(s2):
            offset, swap = s1[len(s2):], True
        else:
            return False
        # z x = offset z y forces z into a prefix of offset^omega
        lang = langs[z]
        if lang.kind == "universal" and alphabet is not None and len(alphabet) == 1:
            lang = periodic(next(iter(alphabet)))
        if lang.kind != "periodic" or primitive_root(offset) != lang.word:
            return False
        rotated = (offset + lang.tail)[len(lang.tail):]
        rest_long = right[k2 + 1:] if not swap else left[k1 + 1:]
        rest_short = left[k1 + 1:] if not swap else right[k2 + 1:]
        rest_long = list(rotated) + list(rest_long)
        left, right = (rest_short, rest_long) if not swap else (rest_long, rest_short)


def transitions_equiv(t1: Transition, t2: Transition, ax, ay, alphabet=None) -> bool:
    """Equation ``eff(f1) = eff(f2)`` over register values in ``ax`` and gap values in ``ay``.

    ``ax`` and ``ay`` are tuples of lattice elements (source registers and
    target gaps), as carried by annotated states.
    """
    if (t1.source, t1.label, t1.target) != (t2.source, t2.label, t2.target):
        raise ValueError("transitions do not share source, label and target")
    if flow_of(t1.update) != flow_of(t2.update):
        raise ValueError("transitions have different flows")
    regs = t1.update.registers
    langs = {Reg(x): a for x, a in zip(regs, ax)}
    langs.update({Gap(j): a for j, a in enumerate(ay)})
    if any(a.kind == "empty" for a in langs.values()):
        return True
    return equation_valid(eff(t1.update), eff(t2.update), langs, alphabet)


def annotated_equiv(sst: Sst, t1: Transition, t2: Transition) -> bool:
    """:func:`transitions_equiv` with approximants read off annotated states."""
    if not isinstance(t1.source, AnnotatedState):
        raise ValueError("states carry no approximants; annotate the machine first")
    return transitions_equiv(t1, t2, t1.source.ax, t1.target.ay, sst.output_alphabet)


@dataclass(frozen=True)
class OracleVerdict:
    equivalent: bool
    witness: tuple | None = None
    contexts: int = 0
    differing: int = 0


class ContextIndex:
    """Initial runs ending at each state and final runs leaving it.

    Every context of a transition with at most ``max_len`` steps lies inside a
    successful run with at most ``max_len + 1`` steps, so those runs suffice.
    """

    def __init__(self, sst: Sst, max_len: int):
        self.max_len = max_len
        prefixes: dict = {}
        suffixes: dict = {}
        for run in successful_runs_by_input(sst, max_len + 1):
            for i, t in enumerate(run.steps):
                prefixes.setdefault(t.source, {})[run.steps[:i]] = None
                suffixes.setdefault(t.target, {})[run.steps[i + 1:]] = None
        self.prefixes = {}
        for q, found in prefixes.items():
            rows = []
            for steps in found:
                val = {x: "" for x in sst.registers}
                for t in steps:
                    val = apply_update(val, t.update)
                rows.append((Run(steps[0].source if steps else q, steps, sst.registers), val))
            self.prefixes[q] = rows
        self.suffixes = {
            q: [(Run(q, steps, sst.registers), compose_all((t.update for t in steps), sst.registers))
                for steps in found]
            for q, found in suffixes.items()
        }


def transitions_equiv_oracle(sst: Sst, t1: Transition, t2: Transition, max_len: int,
                             index: ContextIndex | None = None) -> OracleVerdict:
    """Compare outputs over every context with at most ``max_len`` steps.

    A prebuilt :class:`ContextIndex` can be shared between calls on one machine.
    """
    if (t1.source, t1.label, t1.target) != (t2.source, t2.label, t2.target):
        raise ValueError("transitions do not share source, label and target")
    if index is None or index.max_len != max_len:
        index = ContextIndex(sst, max_len)
    witness, contexts, differing = None, 0, 0
    for rho, val in index.prefixes.get(t1.source, []):
        v1 = apply_update(val, t1.update)
        v2 = apply_update(val, t2.update)
        for sigma, g in index.suffixes.get(t1.target, []):
            if len(rho) + len(sigma) > max_len:
                continue
            contexts += 1
            o1 = apply_update(v1, g)[sst.output_register]
            o2 = apply_update(v2, g)[sst.output_register]
            if o1 != o2:
                differing += 1
                if witness is None:
                    witness = (rho, sigma)
    return OracleVerdict(differing == 0, witness, contexts, differing)


def edge_ambiguity(sst: Sst) -> int:
    counts: dict = {}
    for t in sst.transitions:
        key = (t.source, t.label, t.target)
        counts[key] = counts.get(key, 0) + 1
    return max(counts.values(), default=0)


def prune_edges(sst: Sst, k: int) -> Sst:
    """Keep one transition per class of interchangeable parallel transitions.

    Transitions are scanned in serialization order, so each class keeps its
    least member.
    """
    groups: dict = {}
    for t in sst.transitions:
        groups.setdefault((t.source, t.label, t.target, flow_of(t.update)), []).append(t)
    kept = []
    for members in groups.values():
        reps: list[Transition] = []
        for t in members:
            if not any(annotated_equiv(sst, r, t) for r in reps):
                reps.append(t)
        kept.extend(reps)
    result = sst.replace(transitions=kept)
    bound = k * 2 ** sst.m
    if edge_ambiguity(result) > bound:
        warnings.warn(f"edge ambiguity {edge_ambiguity(result)} exceeds {bound}; is the machine {k}-valued?")
    return result
