"""Copyless streaming string transducers: data model, simulation and flows."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

MARKER = "$"
EMPTY_WORD = "ε"


@dataclass(frozen=True, order=True)
class Reg:
    """A register reference inside an update image."""

    name: str

    def __str__(self) -> str:
        return self.name


@functools.lru_cache(maxsize=1 << 20)
def _repr_key(q) -> str:
    return repr(q)


def state_key(q) -> str:
    # states may be plain names or tuples built by constructions
    return q if isinstance(q, str) else _repr_key(q)


def word_text(items) -> str:
    if not items:
        return EMPTY_WORD
    return " ".join(str(s) for s in items)


def _split_rhs(rhs: str, registers) -> tuple:
    out = []
    for tok in rhs.split():
        if tok == EMPTY_WORD:
            continue
        if tok in registers:
            out.append(Reg(tok))
        else:
            out.extend(tok)
    return tuple(out)


@dataclass(frozen=True)
class Update:
    """Simultaneous assignment: register i receives ``images[i]``.

    Image items are :class:`Reg` references or constants (output letters).
    """

    registers: tuple
    images: tuple

    def __post_init__(self):
        if len(self.registers) != len(self.images):
            raise ValueError("one image per register is required")
        object.__setattr__(self, "_hash", hash((self.registers, self.images)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def from_map(cls, registers: Sequence[str], mapping: Mapping) -> "Update":
        """Build from ``{register: image}``; missing registers keep their value.

        An image is either a sequence of items or a whitespace separated
        string such as ``"x1 a b"``.
        """
        regs = tuple(registers)
        extra = set(mapping) - set(regs)
        if extra:
            raise ValueError(f"undeclared registers {sorted(extra)}")
        images = []
        for x in regs:
            rhs = mapping.get(x, (Reg(x),))
            if isinstance(rhs, str):
                rhs = _split_rhs(rhs, regs)
            images.append(tuple(rhs))
        return cls(regs, tuple(images))

    @classmethod
    def identity(cls, registers: Sequence[str]) -> "Update":
        regs = tuple(registers)
        return cls(regs, tuple((Reg(x),) for x in regs))

    def __getitem__(self, x: str) -> tuple:
        return self.images[self.registers.index(x)]

    def items(self):
        return zip(self.registers, self.images)

    def text(self) -> str:
        return "; ".join(f"{x} := {word_text(img)}" for x, img in self.items())

    def __str__(self) -> str:
        return "{" + self.text() + "}"

    def letter_count(self) -> int:
        return sum(1 for img in self.images for s in img if not isinstance(s, Reg))

    def is_copyless(self) -> bool:
        seen = [s.name for img in self.images for s in img if isinstance(s, Reg)]
        return len(seen) == len(set(seen))

    def occurrence_order(self) -> list[str]:
        """Registers in the order they occur in the concatenated images."""
        return [s.name for img in self.images for s in img if isinstance(s, Reg)]


def compose_updates(f: Update, g: Update) -> Update:
    """The update performing ``f`` first and then ``g``."""
    if f.registers != g.registers:
        raise ValueError("updates act on different register lists")
    images = []
    for img in g.images:
        new = []
        for s in img:
            if isinstance(s, Reg):
                new.extend(f[s.name])
            else:
                new.append(s)
        images.append(tuple(new))
    return Update(f.registers, tuple(images))


def compose_all(updates: Iterable[Update], registers: Sequence[str]) -> Update:
    acc = Update.identity(registers)
    for u in updates:
        acc = compose_updates(acc, u)
    return acc


def apply_update(valuation: Mapping[str, str], f: Update) -> dict[str, str]:
    return {
        x: "".join(valuation[s.name] if isinstance(s, Reg) else s for s in img)
        for x, img in f.items()
    }


def substitute(items: Iterable, valuation: Mapping) -> str:
    """Evaluate a word over registers and letters under ``valuation``."""
    return "".join(valuation[s.name] if isinstance(s, Reg) else s for s in items)


@dataclass(frozen=True)
class Flow:
    """For each target register, the source registers of its image in order."""

    registers: tuple
    sources: tuple

    def __getitem__(self, x: str) -> tuple:
        return self.sources[self.registers.index(x)]

    def as_dict(self) -> dict[str, list[str]]:
        return {x: list(src) for x, src in zip(self.registers, self.sources)}

    def __str__(self) -> str:
        parts = [f"{x}<-{','.join(src) or '-'}" for x, src in zip(self.registers, self.sources)]
        return "[" + " ".join(parts) + "]"


def flow_of(u: Update) -> Flow:
    return Flow(u.registers, tuple(tuple(s.name for s in img if isinstance(s, Reg)) for img in u.images))


def compose_flows(f1: Flow, f2: Flow) -> Flow:
    """Flow of ``f1`` followed by ``f2``; agrees with :func:`compose_updates`."""
    if f1.registers != f2.registers:
        raise ValueError("flows act on different register lists")
    return Flow(f1.registers, tuple(tuple(r for s in src for r in f1[s]) for src in f2.sources))


def is_idempotent_flow(f: Flow) -> bool:
    return compose_flows(f, f) == f


@dataclass(frozen=True)
class Transition:
    source: object
    label: str
    update: Update
    target: object

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.source, self.label, self.update, self.target)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def key(self) -> tuple:
        return (state_key(self.source), self.label, state_key(self.target), self.update.text())

    def __str__(self) -> str:
        return f"{state_key(self.source)} -{self.label}-> {state_key(self.target)} {self.update}"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    location: str = ""
    severity: str = "error"

    def __str__(self) -> str:
        loc = f" at {self.location}" if self.location else ""
        return f"{self.severity}[{self.code}]{loc}: {self.message}"


@dataclass(frozen=True)
class Sst:
    input_alphabet: frozenset
    output_alphabet: frozenset
    registers: tuple
    states: frozenset
    initial: frozenset
    final: frozenset
    transitions: tuple
    output_register: str

    def __post_init__(self):
        object.__setattr__(self, "input_alphabet", frozenset(self.input_alphabet))
        object.__setattr__(self, "output_alphabet", frozenset(self.output_alphabet))
        object.__setattr__(self, "registers", tuple(self.registers))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        trans = sorted(set(self.transitions), key=lambda t: t.key)
        object.__setattr__(self, "transitions", tuple(trans))

    @property
    def m(self) -> int:
        return len(self.registers)

    def replace(self, **changes) -> "Sst":
        return replace(self, **changes)

    @cached_property
    def _by_source_label(self) -> dict:
        index: dict = {}
        for t in self.transitions:
            index.setdefault((t.source, t.label), []).append(t)
        return index

    @cached_property
    def _by_source(self) -> dict:
        index: dict = {}
        for t in self.transitions:
            index.setdefault(t.source, []).append(t)
        return index

    @cached_property
    def _by_target(self) -> dict:
        index: dict = {}
        for t in self.transitions:
            index.setdefault(t.target, []).append(t)
        return index

    def step(self, q, a) -> list[Transition]:
        return self._by_source_label.get((q, a), [])

    def outgoing(self, q) -> list[Transition]:
        return self._by_source.get(q, [])

    def incoming(self, q) -> list[Transition]:
        return self._by_target.get(q, [])

    def sorted_states(self) -> list:
        return list(self._sorted_states)

    @cached_property
    def _sorted_states(self) -> tuple:
        return tuple(sorted(self.states, key=state_key))

    @cached_property
    def sorted_initial(self) -> tuple:
        return tuple(q for q in self._sorted_states if q in self.initial)

    def letters(self) -> list[str]:
        """Input letters other than the end marker, sorted."""
        return sorted(a for a in self.input_alphabet if a != MARKER)


def capacity(sst: Sst) -> int:
    return max((t.update.letter_count() for t in sst.transitions), default=0)


def _reach(starts, succ) -> set:
    seen = set(starts)
    todo = list(starts)
    while todo:
        q = todo.pop()
        for r in succ(q):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


def reachable_states(sst: Sst) -> set:
    return _reach(sst.initial, lambda q: [t.target for t in sst.outgoing(q)])


def coreachable_states(sst: Sst) -> set:
    return _reach(sst.final, lambda q: [t.source for t in sst.incoming(q)])


def trim(sst: Sst) -> Sst:
    """Keep only states that are reachable and co-reachable."""
    live = reachable_states(sst) & coreachable_states(sst)
    return sst.replace(
        states=live,
        initial=sst.initial & live,
        final=sst.final & live,
        transitions=[t for t in sst.transitions if t.source in live and t.target in live],
    )


def validate(sst: Sst) -> list[Diagnostic]:
    """Structural checks; an empty list means the machine is well formed."""
    diags: list[Diagnostic] = []
    regs = set(sst.registers)
    if len(regs) != len(sst.registers):
        diags.append(Diagnostic("dup-register", "register declared twice"))
    if MARKER not in sst.input_alphabet:
        diags.append(Diagnostic("no-marker", f"input alphabet lacks the end marker {MARKER!r}"))
    if sst.output_register not in regs:
        diags.append(Diagnostic("output-register", f"output register {sst.output_register!r} is not declared"))
    clash = regs & set(sst.output_alphabet)
    if clash:
        diags.append(Diagnostic("name-clash", f"names used both as register and letter: {sorted(clash)}"))
    for q in sorted(sst.initial - sst.states, key=state_key):
        diags.append(Diagnostic("unknown-state", "initial state not declared", state_key(q)))
    for q in sorted(sst.final - sst.states, key=state_key):
        diags.append(Diagnostic("unknown-state", "final state not declared", state_key(q)))
    if not sst.initial:
        diags.append(Diagnostic("no-initial", "no initial state", severity="warning"))
    if not sst.final:
        diags.append(Diagnostic("no-final", "no final state", severity="warning"))
    for t in sst.transitions:
        where = str(t)
        if t.source not in sst.states or t.target not in sst.states:
            diags.append(Diagnostic("unknown-state", "transition uses an undeclared state", where))
        if t.label not in sst.input_alphabet:
            diags.append(Diagnostic("bad-label", f"label {t.label!r} not in the input alphabet", where))
        if t.update.registers != sst.registers:
            diags.append(Diagnostic("bad-update", "update registers differ from the machine", where))
            continue
        for img in t.update.images:
            for s in img:
                if isinstance(s, Reg):
                    if s.name not in regs:
                        diags.append(Diagnostic("bad-update", f"undeclared register {s.name}", where))
                elif s not in sst.output_alphabet:
                    diags.append(Diagnostic("bad-letter", f"letter {s!r} not in the output alphabet", where))
        if not t.update.is_copyless():
            dup = sorted({r for r in t.update.occurrence_order() if t.update.occurrence_order().count(r) > 1})
            diags.append(Diagnostic("not-copyless", f"registers used twice: {dup}", where))
    diags.extend(_marker_diagnostics(sst))
    return diags


def _marker_diagnostics(sst: Sst) -> list[Diagnostic]:
    # states reachable on marker-free prefixes, then one marker step later
    before = _reach(sst.initial, lambda q: [t.target for t in sst.outgoing(q) if t.label != MARKER])
    after = {t.target for q in before for t in sst.outgoing(q) if t.label == MARKER}
    useful = coreachable_states(sst)
    diags = []
    accepting = sorted(before & sst.final, key=state_key)
    if accepting:
        diags.append(Diagnostic(
            "marker", "a final state is reached by an input without the end marker",
            ", ".join(state_key(q) for q in accepting)))
    for q in sorted(after, key=state_key):
        for t in sst.outgoing(q):
            if t.target in useful:
                diags.append(Diagnostic("marker", "an accepted input continues after the end marker", str(t)))
    return diags


def check_input(sst: Sst, word: str) -> None:
    if not word or word[-1] != MARKER:
        raise ValueError(f"input {word!r} must end with the marker {MARKER!r}")
    if MARKER in word[:-1]:
        raise ValueError(f"input {word!r} has the marker before its end")
    bad = sorted(set(word) - set(sst.input_alphabet))
    if bad:
        raise ValueError(f"input {word!r} uses letters outside the alphabet: {bad}")


@dataclass(frozen=True)
class Run:
    start: object
    steps: tuple
    registers: tuple = field(default=())

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def word(self) -> str:
        return "".join(t.label for t in self.steps)

    @property
    def states(self) -> list:
        return [self.start] + [t.target for t in self.steps]

    @property
    def end(self):
        return self.steps[-1].target if self.steps else self.start

    def update(self, i: int = 0, j: int | None = None) -> Update:
        """Induced update of the factor ``steps[i:j]``."""
        return compose_all((t.update for t in self.steps[i:j]), self.registers)

    def factor(self, i: int, j: int) -> "Run":
        start = self.states[i]
        return Run(start, self.steps[i:j], self.registers)


def iter_runs(sst: Sst, starts, max_len: int, stop=None) -> Iterator[Run]:
    """All runs from ``starts`` with at most ``max_len`` steps; depth first."""
    stack = [(q, ()) for q in sorted(starts, key=state_key)]
    while stack:
        q, steps = stack.pop()
        yield Run(steps[0].source if steps else q, steps, sst.registers)
        if len(steps) >= max_len:
            continue
        for t in reversed(sst.outgoing(q)):
            stack.append((t.target, steps + (t,)))


def distances_to(sst: Sst, goals) -> dict:
    """Fewest steps from each state to some state in ``goals``."""
    dist = {q: 0 for q in goals}
    frontier = list(goals)
    while frontier:
        nxt = []
        for q in frontier:
            for t in sst.incoming(q):
                if t.source not in dist:
                    dist[t.source] = dist[q] + 1
                    nxt.append(t.source)
        frontier = nxt
    return dist


def runs_between(sst: Sst, starts, goals, max_len: int) -> Iterator[Run]:
    """Runs from ``starts`` ending in ``goals`` with at most ``max_len`` steps."""
    goals = set(goals)
    dist = distances_to(sst, goals)
    stack = [(q, q, ()) for q in sorted(starts, key=state_key) if dist.get(q, max_len + 1) <= max_len]
    while stack:
        start, q, steps = stack.pop()
        if q in goals:
            yield Run(start, steps, sst.registers)
        for t in reversed(sst.outgoing(q)):
            if len(steps) + 1 + dist.get(t.target, max_len + 1) <= max_len:
                stack.append((start, t.target, steps + (t,)))


def successful_runs(sst: Sst, max_len: int) -> Iterator[Run]:
    live = coreachable_states(sst)
    stack = [(q, q, ()) for q in sorted(sst.initial & live, key=state_key)]
    while stack:
        start, q, steps = stack.pop()
        if q in sst.final and steps:
            yield Run(start, steps, sst.registers)
        if len(steps) >= max_len:
            continue
        for t in reversed(sst.outgoing(q)):
            if t.target in live:
                stack.append((start, t.target, steps + (t,)))


def runs(sst: Sst, word: str) -> list[Run]:
    """Successful runs on a well formed input."""
    check_input(sst, word)
    # alive[i]: states that can read word[i:] and stop in a final state
    alive = [set() for _ in range(len(word) + 1)]
    alive[-1] = set(sst.final)
    for i in range(len(word) - 1, -1, -1):
        alive[i] = {t.source for q in alive[i + 1] for t in sst.incoming(q) if t.label == word[i]}
    found = []

    def walk(start, q, steps):
        if len(steps) == len(word):
            found.append(Run(start, steps, sst.registers))
            return
        for t in sst.step(q, word[len(steps)]):
            if t.target in alive[len(steps) + 1]:
                walk(start, t.target, steps + (t,))

    for q in sst.sorted_initial:
        if q in alive[0]:
            walk(q, q, ())
    return found


def successful_runs_by_input(sst: Sst, max_len: int) -> Iterator[Run]:
    """Successful runs on every well formed input of length at most ``max_len``."""
    for w in well_formed_inputs(sst.letters(), max_len):
        yield from runs(sst, w)


def register_valuation(run: Run, i: int | None = None) -> dict[str, str]:
    """Register contents after the first ``i`` steps (all steps by default)."""
    val = {x: "" for x in run.registers}
    for t in run.steps[:i]:
        val = apply_update(val, t.update)
    return val


def run_output(sst: Sst, run: Run) -> str:
    return register_valuation(run)[sst.output_register]


def evaluate(sst: Sst, word: str) -> frozenset:
    """Set of outputs of all successful runs on ``word``."""
    check_input(sst, word)
    configs = {(q, tuple("" for _ in sst.registers)) for q in sst.initial}
    for a in word:
        nxt = set()
        for q, vals in configs:
            val = dict(zip(sst.registers, vals))
            for t in sst.step(q, a):
                new = apply_update(val, t.update)
                nxt.add((t.target, tuple(new[x] for x in sst.registers)))
        configs = nxt
    out = sst.registers.index(sst.output_register)
    return frozenset(vals[out] for q, vals in configs if q in sst.final)


def well_formed_inputs(letters: Sequence[str], max_len: int) -> Iterator[str]:
    """Inputs ``u$`` with ``len(u$) <= max_len`` in shortlex order."""
    letters = sorted(letters)
    for n in range(max_len):
        for u in itertools.product(letters, repeat=n):
            yield "".join(u) + MARKER


@dataclass(frozen=True)
class ValuednessReport:
    ok: bool
    witness: str | None = None
    outputs: frozenset = frozenset()


def is_k_valued_bounded(sst: Sst, k: int, max_len: int) -> ValuednessReport:
    for w in well_formed_inputs(sst.letters(), max_len):
        outs = evaluate(sst, w)
        if len(outs) > k:
            return ValuednessReport(False, w, outs)
    return ValuednessReport(True)


def find_loops(run: Run) -> list[tuple[int, int]]:
    """Factors ``[i, j)`` that return to their start state with an idempotent flow."""
    states = run.states
    loops = []
    for i in range(len(run.steps)):
        flow = flow_of(Update.identity(run.registers))
        for j in range(i + 1, len(run.steps) + 1):
            flow = compose_flows(flow, flow_of(run.steps[j - 1].update))
            if states[i] == states[j] and is_idempotent_flow(flow):
                loops.append((i, j))
    return loops


def pump(run: Run, loops: Sequence[tuple[int, int]], n: int) -> Run:
    """Repeat each loop factor ``n`` times (``n = 1`` leaves the run unchanged)."""
    if n < 1:
        raise ValueError("pumping exponent must be at least 1")
    ordered = sorted(loops)
    for (i, j), (k, _) in zip(ordered, ordered[1:]):
        if j > k:
            raise ValueError("loops overlap")
    states = run.states
    for i, j in ordered:
        if not (0 <= i < j <= len(run.steps)) or states[i] != states[j]:
            raise ValueError(f"[{i},{j}) is not a loop of the run")
        if not is_idempotent_flow(flow_of(run.update(i, j))):
            raise ValueError(f"[{i},{j}) does not have an idempotent flow")
    steps = []
    pos = 0
    for i, j in ordered:
        steps.extend(run.steps[pos:i])
        steps.extend(run.steps[i:j] * n)
        pos = j
    steps.extend(run.steps[pos:])
    return Run(run.start, tuple(steps), run.registers)
