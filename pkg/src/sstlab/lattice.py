"""Finite lattice of word languages used as register approximants.

An element is empty, a singleton ``{w}``, a periodic language ``u*v``
(``u`` primitive, ``v`` a strict prefix of ``u``, ``|u| <= alpha``) or the
universal language. Closures are taken with respect to a bound ``alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass


def has_period(w: str, p: int) -> bool:
    return all(w[i] == w[i - p] for i in range(p, len(w)))


def period(w: str) -> int:
    """Least period of ``w`` (``len(w)`` for words without a shorter one)."""
    n = len(w)
    border = [0] * (n + 1)
    k = 0
    for i in range(1, n):
        while k and w[i] != w[k]:
            k = border[k]
        if w[i] == w[k]:
            k += 1
        border[i + 1] = k
    return n - border[n]


def is_primitive(w: str) -> bool:
    if not w:
        raise ValueError("primitivity is undefined for the empty word")
    return (w + w).find(w, 1) == len(w)


def primitive_root(w: str) -> str:
    if not w:
        return ""
    return w[: (w + w).find(w, 1)]


@dataclass(frozen=True, order=True)
class ApproxLang:
    kind: str
    word: str = ""
    tail: str = ""

    def __str__(self) -> str:
        if self.kind == "empty":
            return "∅"
        if self.kind == "universal":
            return "Γ*"
        if self.kind == "single":
            return "{" + (self.word or "ε") + "}"
        return f"({self.word})*{self.tail}"

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    def members(self, max_len: int) -> list[str]:
        """Members up to ``max_len``; universal languages are not enumerable."""
        if self.kind == "empty":
            return []
        if self.kind == "single":
            return [self.word] if len(self.word) <= max_len else []
        if self.kind == "periodic":
            out, w = [], self.tail
            while len(w) <= max_len:
                out.append(w)
                w = self.word + w
            return out
        raise ValueError("the universal language has no finite member list")


EMPTY = ApproxLang("empty")
UNIVERSAL = ApproxLang("universal")
EPSILON = ApproxLang("single", "")


def single(w: str) -> ApproxLang:
    return ApproxLang("single", w)


def periodic(u: str, v: str = "") -> ApproxLang:
    if not u or not is_primitive(u):
        raise ValueError(f"periodic root {u!r} is not primitive")
    if not (len(v) < len(u) and u.startswith(v)):
        raise ValueError(f"{v!r} is not a strict prefix of {u!r}")
    return ApproxLang("periodic", u, v)


def contains(lang: ApproxLang, w: str) -> bool:
    if lang.kind == "empty":
        return False
    if lang.kind == "universal":
        return True
    if lang.kind == "single":
        return w == lang.word
    u, v = lang.word, lang.tail
    k, r = divmod(len(w) - len(v), len(u))
    return len(w) >= len(v) and r == 0 and w == u * k + v


def closure_word(w: str, alpha: int) -> ApproxLang:
    """Least lattice element containing ``w``.

    Short words stay singletons. A longer word goes to the periodic language
    of its period when that is the only periodic superset. If two periodic
    supersets exist their intersection is ``{w}``, which is kept as is.
    """
    if len(w) <= alpha:
        return single(w)
    candidates = [
        periodic(w[:q], w[len(w) - len(w) % q:])
        for q in range(1, alpha + 1)
        if has_period(w, q) and is_primitive(w[:q])
    ]
    if not candidates:
        return UNIVERSAL
    if len(candidates) == 1:
        return candidates[0]
    return single(w)


def subset(a: ApproxLang, b: ApproxLang) -> bool:
    if a.kind == "empty" or b.kind == "universal":
        return True
    if a.kind == "single":
        return contains(b, a.word)
    if a.kind == "universal":
        return False
    return b.kind == "periodic" and (a.word, a.tail) == (b.word, b.tail)


def meet(a: ApproxLang, b: ApproxLang) -> ApproxLang:
    """Exact intersection (always representable, see :func:`closure_word`)."""
    if a.kind == "empty" or b.kind == "empty":
        return EMPTY
    if a.kind == "universal":
        return b
    if b.kind == "universal":
        return a
    if a.kind == "single":
        return a if contains(b, a.word) else EMPTY
    if b.kind == "single":
        return b if contains(a, b.word) else EMPTY
    if a == b:
        return a
    # distinct primitive roots agree on fewer than |u1| + |u2| letters
    bound = len(a.word) + len(b.word) + len(a.tail) + len(b.tail)
    common = [w for w in a.members(bound) if contains(b, w)]
    return single(common[0]) if common else EMPTY


def _rotate(u: str, k: int) -> str:
    k %= len(u)
    return u[k:] + u[:k]


def closure_concat(a: ApproxLang, b: ApproxLang, alpha: int) -> ApproxLang:
    """Least lattice element containing the concatenation ``a · b``."""
    if a.kind == "empty" or b.kind == "empty":
        return EMPTY
    if a.kind == "single" and b.kind == "single":
        return closure_word(a.word + b.word, alpha)
    if a.kind == "universal" or b.kind == "universal":
        return UNIVERSAL
    if a.kind == "periodic":
        u, v = a.word, a.tail
        if b.kind == "single":
            rest = v + b.word
            reps = u * (len(rest) // len(u) + 1)
            if not reps.startswith(rest):
                return UNIVERSAL
            return periodic(u, u[: len(rest) % len(u)])
        if _rotate(u, len(v)) != b.word:
            return UNIVERSAL
        return periodic(u, u[: (len(v) + len(b.tail)) % len(u)])
    # a singleton w followed by u*v: all words w u^k v share the root of w u^omega
    w, u, v = a.word, b.word, b.tail
    p = len(u)
    s = w + u * (len(w) // p + 2)
    if not has_period(s, p):
        return UNIVERSAL
    root = s[:p]
    return periodic(root, root[: (len(w) + len(v)) % p])


def closure_subst(lookup, rhs, alpha: int) -> ApproxLang:
    """Closure of a word whose variables are replaced by lattice elements.

    ``rhs`` items are letters (``str``) or variables looked up in ``lookup``.
    """
    acc = EPSILON
    for s in rhs:
        lang = single(s) if isinstance(s, str) else lookup[s]
        acc = closure_concat(acc, lang, alpha)
    return acc


def lattice_elements(alphabet, alpha: int, max_single=None) -> list[ApproxLang]:
    """All elements with roots and singletons of length at most ``alpha``."""
    import itertools

    letters = sorted(alphabet)
    words = ["".join(p) for n in range((max_single if max_single is not None else alpha) + 1)
             for p in itertools.product(letters, repeat=n)]
    out = [EMPTY, UNIVERSAL] + [single(w) for w in words]
    for w in words:
        if w and len(w) <= alpha and is_primitive(w):
            out.extend(periodic(w, w[:k]) for k in range(len(w)))
    return out
