import itertools

import pytest
from machines import annotated

from sstlab import corpus
from sstlab.approximants import annotate_approximants
from sstlab.core import Reg, Transition, Update, evaluate, flow_of, well_formed_inputs
from sstlab.equivalence import (ContextIndex, annotated_equiv, edge_ambiguity, equation_valid, prune_edges,
                                transitions_equiv, transitions_equiv_oracle)
from sstlab.lattice import UNIVERSAL, periodic, single
from sstlab.normalize import flow_normalize

X = Reg("x")


@pytest.mark.parametrize("left, right, lang, alphabet, expected", [
    (["a", X], [X, "a"], periodic("a"), None, True),
    (["a", X], [X, "a"], UNIVERSAL, None, False),
    (["a", X], [X, "a"], UNIVERSAL, "a", True),
    (["a", "b", X], [X, "a", "b"], periodic("ab"), None, True),
    (["a", "b", X], [X, "a", "b"], periodic("ab", "a"), None, False),
    (["a", X, "b"], ["a", X, "b"], UNIVERSAL, None, True),
    (["a", X], ["b", X], single("a"), None, False),
    ([X, "a"], [X, "b"], periodic("a"), None, False),
])
def test_equation_valid(left, right, lang, alphabet, expected):
    assert equation_valid(left, right, {X: lang}, alphabet) is expected


def test_equation_sides_must_share_variables():
    with pytest.raises(ValueError):
        equation_valid(["a", X], ["a"], {X: UNIVERSAL})


def test_transitions_equiv_requires_parallel_same_flow():
    regs = ("x1",)
    t1 = Transition("p", "a", Update.from_map(regs, {"x1": "x1 a"}), "q")
    t2 = Transition("p", "a", Update.from_map(regs, {"x1": "a x1"}), "r")
    with pytest.raises(ValueError):
        transitions_equiv(t1, t2, (UNIVERSAL,), (UNIVERSAL, UNIVERSAL))


def test_twins_loop_edges():
    regs = ("x1",)
    t1 = Transition("p", "a", Update.from_map(regs, {"x1": "x1 a"}), "p")
    t2 = Transition("p", "a", Update.from_map(regs, {"x1": "a x1"}), "p")
    assert transitions_equiv(t1, t2, (periodic("a"),), (single(""), single("")))
    assert transitions_equiv(t1, t2, (periodic("a"),), (single("b"), single("b")))
    assert not transitions_equiv(t1, t2, (UNIVERSAL,), (single(""), single("")))
    assert transitions_equiv(t1, t2, (UNIVERSAL,), (single(""), single("")), alphabet="a")


def parallel_pairs(sst):
    groups = {}
    for t in sst.transitions:
        groups.setdefault((t.source, t.label, t.target, flow_of(t.update)), []).append(t)
    for members in groups.values():
        yield from itertools.combinations(members, 2)


@pytest.mark.parametrize("name", ["ab", "twins", "guess"])
def test_decision_agrees_with_bounded_contexts(name):
    ann = annotated(name)
    index = ContextIndex(ann, 6)
    for t1, t2 in parallel_pairs(ann):
        verdict = transitions_equiv_oracle(ann, t1, t2, 6, index)
        if annotated_equiv(ann, t1, t2):
            assert verdict.equivalent
        elif verdict.contexts:
            assert not verdict.equivalent


def test_annotated_equiv_needs_annotation():
    t = corpus.load("twins")
    with pytest.raises(ValueError):
        annotated_equiv(t, t.transitions[0], t.transitions[1])


def test_pruning_twins():
    ann = annotate_approximants(flow_normalize(corpus.load("twins")), 1)
    assert edge_ambiguity(ann) == 2
    pruned = prune_edges(ann, 2)
    assert edge_ambiguity(pruned) == 1
    assert len(pruned.transitions) < len(ann.transitions)
    for u in well_formed_inputs("a", 5):
        assert evaluate(pruned, u) == evaluate(ann, u)


def test_pruning_keeps_distinct_outputs():
    ann = annotated("ab")
    pruned = prune_edges(ann, 2)
    for u in well_formed_inputs("a", 5):
        assert evaluate(pruned, u) == evaluate(ann, u)
