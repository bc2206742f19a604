"""Independent reference implementations used to check the library.

Nothing here calls the code under test except for data accessors
(transition lists, register names).
"""
from __future__ import annotations

import itertools
import re


def words(alphabet, max_len: int):
    for n in range(max_len + 1):
        for p in itertools.product(sorted(alphabet), repeat=n):
            yield "".join(p)


def naive_outputs(sst, word: str) -> set:
    """Outputs by exploring runs depth first, substituting text directly."""
    out = set()

    def go(q, i, regs):
        if i == len(word):
            if q in sst.final:
                out.add(regs[sst.output_register])
            return
        for t in sst.transitions:
            if t.source == q and t.label == word[i]:
                new = {}
                for x, img in zip(t.update.registers, t.update.images):
                    new[x] = "".join(regs[s.name] if hasattr(s, "name") else s for s in img)
                go(t.target, i + 1, new)

    for q0 in sst.initial:
        go(q0, 0, {x: "" for x in sst.registers})
    return out


def naive_run_count(sst, word: str) -> int:
    count = 0

    def go(q, i):
        nonlocal count
        if i == len(word):
            count += q in sst.final
            return
        for t in sst.transitions:
            if t.source == q and t.label == word[i]:
                go(t.target, i + 1)

    for q0 in sst.initial:
        go(q0, 0)
    return count


def _primitive(u: str) -> bool:
    return not any(len(u) % d == 0 and u == u[:d] * (len(u) // d) for d in range(1, len(u)))


def periodic_supersets(w: str, alpha: int):
    """(root, tail) pairs with ``w`` in ``root* tail``, by regular expressions."""
    for n in range(1, alpha + 1):
        for u in words("ab" if not w else sorted(set(w) | {"a", "b"}), n):
            if len(u) != n or not _primitive(u):
                continue
            for k in range(n):
                if re.fullmatch(f"(?:{re.escape(u)})*{re.escape(u[:k])}", w):
                    yield u, u[:k]


def brute_closure_members(w: str, alpha: int, bound: int):
    """Members (up to ``bound``) of the intersection of all elements containing ``w``.

    Returns ``None`` when the only superset is the universal language.
    """
    if len(w) <= alpha:
        return {w}
    sups = list(periodic_supersets(w, alpha))
    if not sups:
        return None
    sets = []
    for u, v in sups:
        sets.append({x for x in (u * k + v for k in range(bound + 1)) if len(x) <= bound})
    return set.intersection(*sets)


def lang_members(lang, bound: int):
    if lang.kind == "universal":
        return None
    return set(lang.members(bound))


def pumping_pattern_predicts(w1: str, w2: str, later) -> bool:
    """Is there a way to read ``w2`` as ``w1`` with blocks inserted, such that
    repeating each block ``n - 1`` times gives ``later[n]`` for every listed n?"""
    if len(w2) < len(w1):
        return False

    def predicted(blocks, n):
        out, pos = [], 0
        for p, v in blocks:
            out.append(w1[pos:p])
            out.append(v * (n - 1))
            pos = p
        out.append(w1[pos:])
        return "".join(out)

    def go(i, j, blocks):
        if i == len(w1):
            if j < len(w2):
                blocks = blocks + [(i, w2[j:])]
            return all(predicted(blocks, n) == w for n, w in later.items())
        if j < len(w2) and w1[i] == w2[j] and go(i + 1, j + 1, blocks):
            return True
        if not blocks or blocks[-1][0] != i:
            for k in range(j + 1, len(w2) - (len(w1) - i) + 1):
                if go(i, k, blocks + [(i, w2[j:k])]):
                    return True
        return False

    return go(0, 0, [])
