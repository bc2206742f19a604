"""Machine corpora shared by the test modules."""
from __future__ import annotations

import functools

from sstlab import corpus
from sstlab.approximants import AnnotationTooLarge, annotate_approximants
from sstlab.core import capacity, evaluate, well_formed_inputs
from sstlab.normalize import flow_normalize

# random machines whose annotation at capacity + 2 exceeds this are left out
ANNOTATION_LIMIT = 20000
RANDOM_POOL = 24
RANDOM_TAKEN = 12


@functools.lru_cache(maxsize=None)
def acceptance_corpus() -> tuple:
    """``(name, machine)`` pairs: every bundled machine plus small random ones."""
    out = list(corpus.bundled().items())
    taken = 0
    for i, t in enumerate(corpus.random_corpus(RANDOM_POOL)):
        if taken == RANDOM_TAKEN:
            break
        nt = flow_normalize(t)
        try:
            annotate_approximants(nt, capacity(nt) + 2, ANNOTATION_LIMIT)
        except AnnotationTooLarge:
            continue
        out.append((f"random{i}", t))
        taken += 1
    return tuple(out)


@functools.lru_cache(maxsize=None)
def normalized(name: str):
    return flow_normalize(dict(acceptance_corpus())[name])


@functools.lru_cache(maxsize=None)
def annotated(name: str, extra: int = 0):
    nt = normalized(name)
    return annotate_approximants(nt, capacity(nt) + extra)


@functools.lru_cache(maxsize=None)
def valuedness(name: str, max_len: int = 7) -> int:
    t = dict(acceptance_corpus())[name]
    return max([len(evaluate(t, u)) for u in well_formed_inputs(t.letters(), max_len)] + [1])
