"""Bundled example machines and a seeded generator of random copyless ones."""
from __future__ import annotations

import random
from importlib import resources

from .core import MARKER, Reg, Sst, Transition, Update, trim, validate
from .textio import parse_sst


def bundled_names() -> list[str]:
    files = resources.files("sstlab") / "data"
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".sst"))


def load(name: str) -> Sst:
    text = (resources.files("sstlab") / "data" / f"{name}.sst").read_text(encoding="utf-8")
    return parse_sst(text)


def bundled() -> dict[str, Sst]:
    return {name: load(name) for name in bundled_names()}


def random_update(rng: random.Random, registers, letters, max_letters=2) -> Update:
    """A random copyless update; each register is used at most once."""
    used = [x for x in registers if rng.random() < 0.8]
    rng.shuffle(used)
    images = [[] for _ in registers]
    for x in used:
        images[rng.randrange(len(registers))].append(Reg(x))
    for img in images:
        for _ in range(rng.randint(0, max_letters)):
            img.insert(rng.randint(0, len(img)), rng.choice(letters))
    return Update(tuple(registers), tuple(tuple(img) for img in images))


def random_sst(seed: int, n_states=2, n_registers=2, letters=("a", "b"), outputs=("a", "b"),
               density=0.6, max_letters=2) -> Sst:
    """A trimmed random copyless machine; ``n_states`` counts the final sink too.

    Marker transitions lead into the final sink, which has no outgoing edges,
    so every accepted input ends with the marker exactly once.
    """
    rng = random.Random(seed)
    while True:
        registers = tuple(f"x{i + 1}" for i in range(n_registers))
        inner = [f"q{i}" for i in range(max(1, n_states - 1))]
        transitions = []
        for p in inner:
            for a in letters:
                for q in inner:
                    if rng.random() < density:
                        transitions.append(Transition(p, a, random_update(rng, registers, outputs, max_letters), q))
            for _ in range(rng.choice((1, 1, 2))):
                transitions.append(Transition(p, MARKER, random_update(rng, registers, outputs, max_letters), "qf"))
        sst = trim(Sst(
            input_alphabet=set(letters) | {MARKER},
            output_alphabet=set(outputs),
            registers=registers,
            states=set(inner) | {"qf"},
            initial={"q0"},
            final={"qf"},
            transitions=transitions,
            output_register=registers[0],
        ))
        if sst.transitions and not validate(sst):
            return sst


def random_corpus(count: int, base_seed: int = 0) -> list[Sst]:
    out = []
    for i in range(count):
        rng = random.Random(base_seed * 7919 + i)
        out.append(random_sst(base_seed * 7919 + i, n_states=rng.randint(2, 3), n_registers=rng.randint(1, 3)))
    return out


def same_flow_variants(u: Update) -> list[Update]:
    """Updates with the flow of ``u`` obtained by moving or recoloring one letter."""
    out = set()
    images = [list(img) for img in u.images]
    for i, img in enumerate(images):
        for k, s in enumerate(img):
            if isinstance(s, Reg):
                continue
            # slide the letter one step left or right inside its image
            for d in (-1, 1):
                if 0 <= k + d < len(img):
                    new = [list(x) for x in images]
                    new[i][k], new[i][k + d] = new[i][k + d], new[i][k]
                    out.add(Update(u.registers, tuple(map(tuple, new))))
            # move a boundary letter into the neighbouring image
            if k == len(img) - 1 and i + 1 < len(images):
                new = [list(x) for x in images]
                new[i].pop()
                new[i + 1].insert(0, s)
                out.add(Update(u.registers, tuple(map(tuple, new))))
            if k == 0 and i > 0:
                new = [list(x) for x in images]
                new[i].pop(0)
                new[i - 1].append(s)
                out.add(Update(u.registers, tuple(map(tuple, new))))
            for other in ("a", "b"):
                if other != s:
                    new = [list(x) for x in images]
                    new[i][k] = other
                    out.add(Update(u.registers, tuple(map(tuple, new))))
    out.discard(u)
    return sorted(out, key=lambda v: v.text())


def _keeping_empty(variants, keep_empty) -> list[Update]:
    # registers that stay empty must stay empty, or gap reasoning breaks
    return [v for v in variants if not any(isinstance(s, str) for x in keep_empty for s in v[x])]


def with_parallel_variants(sst: Sst, per_transition: int = 1, seed: int = 0, share: float = 1.0) -> Sst:
    """Add same-flow variants next to a ``share`` of the transitions (duplicated machine)."""
    from .normalize import always_empty

    rng = random.Random(seed)
    empty = always_empty(sst)
    extra = []
    for t in sst.transitions:
        if rng.random() >= share:
            continue
        variants = _keeping_empty(same_flow_variants(t.update), empty.get(t.target, set()))
        for v in rng.sample(variants, min(per_transition, len(variants))):
            extra.append(Transition(t.source, t.label, v, t.target))
    return sst.replace(transitions=list(sst.transitions) + extra)


def with_equivalent_copies(sst: Sst, alpha: int, copies: int = 2, seed: int = 0,
                           max_states: int | None = None) -> Sst:
    """Add up to ``copies`` parallel variants per transition of a flow-normalized
    machine, keeping only variants that are interchangeable with their
    original at every annotated copy of the enlarged machine.

    Candidates are screened against the original annotation, then dropped
    until the enlarged machine confirms every remaining one; its outputs
    are then those of ``sst``.
    """
    from .approximants import annotate_approximants
    from .equivalence import transitions_equiv
    from .normalize import always_empty

    def lifted(annotated):
        table: dict = {}
        for t in annotated.transitions:
            table.setdefault(Transition(t.source.base, t.label, t.update, t.target.base), []).append(t)
        return table

    def interchangeable(table, t, other: Update):
        # every annotated copy of t, compared with other placed in parallel
        return all(transitions_equiv(c, Transition(c.source, c.label, other, c.target),
                                     c.source.ax, c.target.ay, sst.output_alphabet)
                   for c in table.get(t, []))

    rng = random.Random(seed)
    table = lifted(annotate_approximants(sst, alpha, max_states))
    empty = always_empty(sst)
    chosen = {}
    for t in sst.transitions:
        good = [v for v in _keeping_empty(same_flow_variants(t.update), empty.get(t.target, set()))
                if table.get(t) and interchangeable(table, t, v)]
        for v in rng.sample(good, min(copies, len(good))):
            chosen[Transition(t.source, t.label, v, t.target)] = t
    while True:
        enlarged = sst.replace(transitions=list(sst.transitions) + list(chosen))
        table = lifted(annotate_approximants(enlarged, alpha, max_states))
        failing = [v for v, t in chosen.items() if not interchangeable(table, v, t.update)]
        if not failing:
            return enlarged
        for v in failing:
            del chosen[v]
