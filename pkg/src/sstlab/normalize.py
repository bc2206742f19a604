"""Flow normalization: make every update non-erasing and non-permuting.

A state of the normalized machine pairs an original state with a
:class:`Renaming` that records which original registers still reach the
final output, and the slot each of them occupies.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import Reg, Sst, Transition, Update, state_key, trim


@dataclass(frozen=True)
class Renaming:
    """Partial bijection onto an initial segment of the register list.

    ``order[i]`` is the original register moved into slot ``i``.
    """

    order: tuple

    @property
    def dlen(self) -> int:
        return len(self.order)

    def as_map(self, registers) -> dict[str, str]:
        return {r: registers[i] for i, r in enumerate(self.order)}

    @classmethod
    def from_map(cls, mapping, registers) -> "Renaming":
        slots = sorted(registers.index(v) for v in mapping.values())
        if slots != list(range(len(mapping))):
            raise ValueError("a renaming must map onto an initial segment of the registers")
        inverse = {registers.index(v): k for k, v in mapping.items()}
        return cls(tuple(inverse[i] for i in range(len(mapping))))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{r}->#{i + 1}" for i, r in enumerate(self.order)) + "}"


def is_non_erasing(u: Update) -> bool:
    return set(u.occurrence_order()) == set(u.registers)


def is_non_permuting(u: Update) -> bool:
    occ = u.occurrence_order()
    return occ == list(u.registers[: len(occ)])


def is_flow_normalized(sst: Sst) -> bool:
    return all(is_non_erasing(t.update) and is_non_permuting(t.update) for t in sst.transitions) and (
        sst.output_register == sst.registers[0]
    )


def source_renaming(f: Update, after: Renaming) -> Renaming:
    """Registers feeding the live slots of ``after``, in occurrence order."""
    order = [s.name for r in after.order for s in f[r] if isinstance(s, Reg)]
    return Renaming(tuple(order))


def rename_update(f: Update, before: Renaming, after: Renaming) -> Update:
    """Rewrite ``f`` over slot registers.

    Live slots take the renamed image of their original register; the
    remaining (garbage) slots shift down in order. Garbage sources that
    have no slot left are appended to the last register so that nothing
    is erased.
    """
    regs = f.registers
    m = len(regs)
    if set(before.order) != set(source_renaming(f, after).order):
        raise ValueError("renaming domain does not match the registers used by the update")
    if before.order != source_renaming(f, after).order:
        raise ValueError("renaming does not follow the occurrence order of the update")
    slot = before.as_map(regs)
    shift = before.dlen - after.dlen
    images = []
    for i in range(1, m + 1):
        if i <= after.dlen:
            img = tuple(Reg(slot[s.name]) if isinstance(s, Reg) else s for s in f[after.order[i - 1]])
        elif i + shift <= m:
            img = (Reg(regs[i + shift - 1]),)
        else:
            img = ()
        images.append(img)
    # garbage sources x_j with j > m + shift have no slot and would be dropped
    overflow = tuple(Reg(regs[j - 1]) for j in range(max(before.dlen, m + shift) + 1, m + 1))
    if overflow:
        images[-1] = images[-1] + overflow
    return Update(regs, tuple(images))


def flow_normalize(sst: Sst) -> Sst:
    """Equivalent machine whose updates are non-erasing and non-permuting.

    The output register of the result is the first register.
    """
    final_renaming = Renaming((sst.output_register,))
    todo = [(q, final_renaming) for q in sorted(sst.final, key=state_key)]
    seen = set(todo)
    transitions = []
    while todo:
        target = todo.pop()
        q2, after = target
        for t in sst.incoming(q2):
            before = source_renaming(t.update, after)
            source = (t.source, before)
            transitions.append(Transition(source, t.label, rename_update(t.update, before, after), target))
            if source not in seen:
                seen.add(source)
                todo.append(source)
    result = Sst(
        input_alphabet=sst.input_alphabet,
        output_alphabet=sst.output_alphabet,
        registers=sst.registers,
        states=seen,
        initial={s for s in seen if s[0] in sst.initial},
        final={(q, final_renaming) for q in sst.final},
        transitions=transitions,
        output_register=sst.registers[0],
    )
    return trim(result)


def always_empty(sst: Sst) -> dict:
    """For each reachable state, the registers that are empty in every run reaching it."""
    filled = {q: set() for q in sst.initial}
    todo = list(sst.initial)
    while todo:
        q = todo.pop()
        for t in sst.outgoing(q):
            now = {
                x for x, img in t.update.items()
                if any(not isinstance(s, Reg) or s.name in filled[q] for s in img)
            }
            if t.target not in filled or not now <= filled[t.target]:
                filled.setdefault(t.target, set()).update(now)
                todo.append(t.target)
    return {q: set(sst.registers) - regs for q, regs in filled.items()}
