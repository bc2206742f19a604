"""Reading and writing the ``.sst`` text format.

Example::

    alphabet input: a b $;
    alphabet output: a b;
    registers: x1 x2;
    output: x1;
    state q0 initial;
    state qf final;
    trans q0 -> q0 on a { x1 := x1 a; x2 := x2 a; }

Registers missing from a ``{...}`` block keep their value. ``ε`` (or
nothing) denotes the empty image. ``#`` starts a comment.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass

from .core import EMPTY_WORD, MARKER, Reg, Sst, Transition, Update, state_key, word_text


@dataclass(frozen=True)
class SyntaxIssue:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class SstSyntaxError(ValueError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


_TOKEN = re.compile(r"\s*(?:(#[^\n]*)|(:=|->|[{};:])|([^\s{};:#]+))")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_'.]*$")


def _tokens(text: str):
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(pos):
        line = bisect.bisect_right(line_starts, pos) - 1
        return line + 1, pos - line_starts[line] + 1

    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SstSyntaxError([SyntaxIssue(*where(pos), f"unexpected character {text[pos]!r}")])
        pos = m.end()
        if m.group(1):
            continue
        tok = m.group(2) or m.group(3)
        if tok:
            out.append((tok, *where(m.start(2) if m.group(2) else m.start(3))))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0
        self.issues = []

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def loc(self):
        if self.i < len(self.toks):
            return self.toks[self.i][1:]
        if self.toks:
            return self.toks[-1][1:]
        return (1, 1)

    def fail(self, msg):
        raise SstSyntaxError([SyntaxIssue(*self.loc(), msg)])

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            self.fail(f"unexpected end of input, expected {expected or 'a token'}")
        if expected is not None and tok != expected:
            self.fail(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def until(self, stop):
        items = []
        while self.peek() not in (stop, None):
            items.append(self.take())
        self.take(stop)
        return items


def parse_sst(text: str) -> Sst:
    """Parse the text format; raises :class:`SstSyntaxError` with positions."""
    p = _Parser(text)
    inputs = outputs = registers = output = None
    states: dict[str, set] = {}
    raw_trans = []
    while p.peek() is not None:
        line, col = p.loc()
        kw = p.take()
        if kw == "alphabet":
            which = p.take()
            p.take(":")
            letters = p.until(";")
            for a in letters:
                if len(a) != 1 or a == EMPTY_WORD:
                    p.issues.append(SyntaxIssue(line, col, f"alphabet symbol {a!r} must be a single letter"))
            if which == "input":
                inputs = letters
            elif which == "output":
                outputs = letters
            else:
                p.issues.append(SyntaxIssue(line, col, f"unknown alphabet kind {which!r}"))
        elif kw == "registers":
            p.take(":")
            registers = p.until(";")
        elif kw == "output":
            p.take(":")
            names = p.until(";")
            if len(names) != 1:
                p.issues.append(SyntaxIssue(line, col, "exactly one output register expected"))
            else:
                output = names[0]
        elif kw == "state":
            name = p.take()
            if not _IDENT.match(name):
                p.issues.append(SyntaxIssue(line, col, f"bad state name {name!r}"))
            flags = p.until(";")
            for fl in flags:
                if fl not in ("initial", "final"):
                    p.issues.append(SyntaxIssue(line, col, f"unknown state flag {fl!r}"))
            states.setdefault(name, set()).update(flags)
        elif kw == "trans":
            src = p.take()
            p.take("->")
            tgt = p.take()
            p.take("on")
            label = p.take()
            p.take("{")
            assigns = []
            while p.peek() != "}":
                aline, acol = p.loc()
                lhs = p.take()
                p.take(":=")
                rhs = []
                while p.peek() not in (";", "}", None):
                    rhs.append(p.take())
                if p.peek() == ";":
                    p.take(";")
                assigns.append((lhs, rhs, aline, acol))
            p.take("}")
            raw_trans.append((src, tgt, label, assigns, line, col))
        else:
            p.issues.append(SyntaxIssue(line, col, f"unknown keyword {kw!r}"))
            while p.peek() not in (";", None):
                p.take()
            if p.peek() == ";":
                p.take()
    for what, val in (("alphabet input", inputs), ("alphabet output", outputs),
                      ("registers", registers), ("output", output)):
        if val is None:
            p.issues.append(SyntaxIssue(1, 1, f"missing '{what}' clause"))
    if p.issues:
        raise SstSyntaxError(p.issues)
    regset = set(registers)
    transitions = []
    for src, tgt, label, assigns, line, col in raw_trans:
        for q in (src, tgt):
            if q not in states:
                p.issues.append(SyntaxIssue(line, col, f"undeclared state {q!r}"))
        mapping = {}
        for lhs, rhs, aline, acol in assigns:
            if lhs not in regset:
                p.issues.append(SyntaxIssue(aline, acol, f"assignment to undeclared register {lhs!r}"))
                continue
            if lhs in mapping:
                p.issues.append(SyntaxIssue(aline, acol, f"register {lhs!r} assigned twice"))
            items = []
            for tok in rhs:
                if tok == EMPTY_WORD:
                    continue
                if tok in regset:
                    items.append(Reg(tok))
                elif len(tok) == 1:
                    items.append(tok)
                else:
                    p.issues.append(SyntaxIssue(aline, acol, f"{tok!r} is neither a register nor a letter"))
            mapping[lhs] = tuple(items)
        transitions.append(Transition(src, label, Update.from_map(registers, mapping), tgt))
    if p.issues:
        raise SstSyntaxError(p.issues)
    return Sst(
        input_alphabet=inputs,
        output_alphabet=outputs,
        registers=registers,
        states=states,
        initial=[q for q, fl in states.items() if "initial" in fl],
        final=[q for q, fl in states.items() if "final" in fl],
        transitions=transitions,
        output_register=output,
    )


def _letters(alpha) -> str:
    rest = sorted(a for a in alpha if a != MARKER)
    if MARKER in alpha:
        rest.append(MARKER)
    return " ".join(rest)


def serialize_sst(sst: Sst, comments=()) -> str:
    """Canonical text; ``parse_sst(serialize_sst(t))`` reproduces ``t``.

    States that are not plain names must be renamed first (see :func:`relabel`).
    """
    for q in sst.states:
        if not isinstance(q, str) or not _IDENT.match(q):
            raise ValueError(f"state {q!r} has no printable name; relabel the machine first")
    lines = [f"# {c}" for c in comments]
    lines.append(f"alphabet input: {_letters(sst.input_alphabet)};")
    lines.append(f"alphabet output: {_letters(sst.output_alphabet)};")
    lines.append(f"registers: {' '.join(sst.registers)};")
    lines.append(f"output: {sst.output_register};")
    for q in sst.sorted_states():
        flags = [fl for fl, on in (("initial", q in sst.initial), ("final", q in sst.final)) if on]
        lines.append("state " + " ".join([q] + flags) + ";")
    for t in sst.transitions:
        body = " ".join(f"{x} := {word_text(img)};" for x, img in t.update.items())
        lines.append(f"trans {t.source} -> {t.target} on {t.label} {{ {body} }}")
    return "\n".join(lines) + "\n"


def relabel(sst: Sst, prefix: str = "q"):
    """Rename states to ``q0, q1, ...``; returns the machine and the name map."""
    if all(isinstance(q, str) and _IDENT.match(q) for q in sst.states):
        return sst, {q: q for q in sst.states}
    names = {q: f"{prefix}{i}" for i, q in enumerate(sst.sorted_states())}
    renamed = sst.replace(
        states=set(names.values()),
        initial={names[q] for q in sst.initial},
        final={names[q] for q in sst.final},
        transitions=[Transition(names[t.source], t.label, t.update, names[t.target]) for t in sst.transitions],
    )
    return renamed, names


def describe_state(q) -> str:
    return state_key(q) if not hasattr(q, "describe") else q.describe()


def printable(sst: Sst, header=()) -> str:
    """Serialize any machine, documenting renamed states in comments."""
    renamed, names = relabel(sst)
    notes = list(header)
    for q, name in sorted(names.items(), key=lambda kv: kv[1]):
        if name != q:
            notes.append(f"{name} = {describe_state(q)}")
    return serialize_sst(renamed, notes)
