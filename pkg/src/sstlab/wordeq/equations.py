"""Word equations over unknowns and output letters, and their text format.

A word is a tuple whose items are :class:`Unknown` or single letters.
A system is a conjunction of clauses; a clause is a disjunction of
conjunctions of equations.

Text format, one equation per line::

    # u=a$
    X a = a X
    |
    X = ε
    &
    Y b = b Y

``|`` lines separate disjuncts of a clause, ``&`` lines separate clauses,
a ``false`` line makes its clause unsatisfiable, and a ``# u=...`` comment
records where the following clause came from.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

EMPTY = "ε"


@dataclass(frozen=True, order=True)
class Unknown:
    name: str
    side: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.name


def word_str(word) -> str:
    return " ".join(str(s) for s in word) if word else EMPTY


def unknowns_of(word) -> set:
    return {s for s in word if isinstance(s, Unknown)}


def apply_assignment(word, sigma) -> str:
    try:
        return "".join(sigma[s] if isinstance(s, Unknown) else s for s in word)
    except KeyError as err:
        raise KeyError(f"assignment misses unknown {err.args[0]}") from None


@dataclass(frozen=True, order=True)
class Equation:
    left: tuple
    right: tuple

    def __str__(self) -> str:
        return f"{word_str(self.left)} = {word_str(self.right)}"

    def unknowns(self) -> set:
        return unknowns_of(self.left) | unknowns_of(self.right)

    def holds(self, sigma) -> bool:
        return apply_assignment(self.left, sigma) == apply_assignment(self.right, sigma)

    def is_trivial(self) -> bool:
        return self.left == self.right

    def canonical(self) -> "Equation":
        a, b = sorted((self.left, self.right), key=_word_key)
        return Equation(a, b)


def _word_key(word) -> tuple:
    return tuple((1, s.name) if isinstance(s, Unknown) else (0, s) for s in word)


def _eq_key(eq: Equation) -> tuple:
    return (_word_key(eq.left), _word_key(eq.right))


def canonical_conjunction(eqs) -> tuple:
    """Sorted, deduplicated, with trivial equations dropped."""
    found = {e.canonical() for e in eqs if not e.is_trivial()}
    return tuple(sorted(found, key=_eq_key))


@dataclass(frozen=True)
class Clause:
    """Disjunction of conjunctions; no options at all means false."""

    options: tuple
    provenance: str = ""

    def unknowns(self) -> set:
        return {x for conj in self.options for e in conj for x in e.unknowns()}

    def is_true(self) -> bool:
        return any(len(conj) == 0 for conj in self.options)


@dataclass(frozen=True)
class EqSystem:
    clauses: tuple = ()

    def unknowns(self) -> list:
        return sorted({x for c in self.clauses for x in c.unknowns()})

    def letters(self) -> set:
        return {s for c in self.clauses for conj in c.options for e in conj
                for s in e.left + e.right if not isinstance(s, Unknown)}

    def simplified(self) -> "EqSystem":
        """Canonical disjuncts, duplicates removed, true clauses dropped."""
        out = []
        for c in self.clauses:
            opts = tuple(dict.fromkeys(canonical_conjunction(conj) for conj in c.options))
            c = Clause(opts, c.provenance)
            if not c.is_true():
                out.append(c)
        return EqSystem(tuple(out))


def conjunction(eqs, provenance: str = "") -> EqSystem:
    return EqSystem((Clause((tuple(eqs),), provenance),))


_ITEM = re.compile(r"\s*(?:([A-Z][A-Z0-9_]*)|(ε)|(\S))")


def parse_word(text: str) -> tuple:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _ITEM.match(text, pos)
        if m is None:
            break
        name, _, letter = m.groups()
        if name:
            out.append(Unknown(name))
        elif letter:
            if letter in "=|&#":
                raise ValueError(f"unexpected {letter!r} in word {text!r}")
            out.append(letter)
        pos = m.end()
    return tuple(out)


def parse_equation(text: str) -> Equation:
    if text.count("=") != 1:
        raise ValueError(f"equation needs exactly one '=': {text!r}")
    left, right = text.split("=")
    return Equation(parse_word(left), parse_word(right))


def parse_system(text: str) -> EqSystem:
    clauses, options, current = [], [], []
    provenance = ""

    def close_option():
        options.append(tuple(current))
        current.clear()

    def close_clause():
        nonlocal provenance, falsum
        close_option()
        clauses.append(Clause(() if falsum else tuple(options), provenance))
        options.clear()
        provenance, falsum = "", False

    seen_any, falsum = False, False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*u\s*=\s*(\S*)", line)
            if m:
                provenance = m.group(1)
            continue
        seen_any = True
        if line == "false":
            falsum = True
        elif line == "|":
            close_option()
        elif line == "&":
            close_clause()
        else:
            try:
                current.append(parse_equation(line))
            except ValueError as err:
                raise ValueError(f"line {lineno}: {err}") from None
    if seen_any:
        close_clause()
    return EqSystem(tuple(clauses))


def format_system(system: EqSystem) -> str:
    blocks = []
    for c in system.clauses:
        lines = [f"# u={c.provenance}"] if c.provenance else []
        if not c.options:
            lines.append("false")
        for i, conj in enumerate(c.options):
            if i:
                lines.append("|")
            lines.extend(str(e) for e in conj)
            if not conj:
                lines.append(f"{EMPTY} = {EMPTY}")
        blocks.append("\n".join(lines))
    return "\n&\n".join(blocks) + ("\n" if blocks else "")
