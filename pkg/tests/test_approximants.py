import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from machines import annotated, normalized

from sstlab import corpus
from sstlab.approximants import (AnnotatedState, AnnotationTooLarge, Gap, annotate_approximants, check_admits,
                                 effect_word, gap_extract, gap_update, gap_valuation, tightness_probe,
                                 update_from_gaps)
from sstlab.core import Reg, Update, capacity, evaluate, register_valuation, runs, well_formed_inputs
from sstlab.lattice import periodic, single
from sstlab.normalize import flow_normalize

REGS = ("x1", "x2")


def upd(mapping, regs=REGS):
    return Update.from_map(regs, mapping)


def test_effect_word():
    f = upd({"x1": "x1 a", "x2": "x2"})
    assert effect_word(f) == (Gap(0), Reg("x1"), "a", Gap(1), Reg("x2"), Gap(2))


def test_gap_extract():
    w = ("a", Reg("x1"), "b", "c", Reg("x2"), "d")
    assert gap_extract(w, 0, REGS) == ("a",)
    assert gap_extract(w, 1, REGS) == ("b", "c")
    assert gap_extract(w, 2, REGS) == ("d",)
    assert gap_extract(("a", Reg("x1")), 2, REGS) == ()
    with pytest.raises(ValueError):
        gap_extract((Reg("x2"), Reg("x1")), 0, REGS)


def test_gap_update_example():
    g = gap_update(upd({"x1": "a x1 b", "x2": "x2 c"}))
    assert str(g) == "{y0 := y0 a; y1 := b y1; y2 := c y2}"
    with pytest.raises(ValueError):
        gap_update(upd({"x1": "x2", "x2": "x1"}))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "x1", "x2"]), max_size=7), st.integers(0, 7))
def test_update_round_trips_through_gaps(items, cut):
    body = [s for s in items if s not in REGS]
    words = body[:cut] + ["x1"] + body[cut:] + ["x2"]
    f = upd({"x1": " ".join(words[: cut + 1]) or "", "x2": " ".join(words[cut + 1:])})
    assert update_from_gaps(gap_update(f), REGS) == f


def test_doubler_gap_valuations():
    nt = flow_normalize(corpus.load("dup"))
    run = runs(nt, "aa$")[0]
    assert gap_valuation(run, 0) == {0: "", 1: "aa", 2: "aa"}
    assert gap_valuation(run, 1) == {0: "", 1: "a", 2: "a"}
    assert gap_valuation(run, 3) == {0: "", 1: "", 2: ""}
    with pytest.raises(IndexError):
        gap_valuation(run, 4)


def test_gap_identity_holds_along_runs():
    nt = normalized("fgh")
    for u in well_formed_inputs(nt.letters(), 4):
        for run in runs(nt, u):
            out = next(iter(evaluate(nt, u)))
            for i in range(len(run) + 1):
                gv, rv = gap_valuation(run, i), register_valuation(run, i)
                text = gv[0] + "".join(rv[x] + gv[j + 1] for j, x in enumerate(nt.registers))
                assert text == out


def test_doubler_annotation():
    ann = annotate_approximants(flow_normalize(corpus.load("dup")), 2)
    assert len(ann.states) == 19
    finals = {q.ax[0] for q in ann.final}
    assert finals == {single(""), single("aa"), periodic("a")}
    assert all(isinstance(q, AnnotatedState) for q in ann.states)
    for u in well_formed_inputs("a", 6):
        assert evaluate(ann, u) == evaluate(corpus.load("dup"), u)


@pytest.mark.parametrize("name", ["ab", "dup", "fgh", "guess", "twins"])
def test_annotation_is_admitted(name):
    alpha = capacity(normalized(name))
    assert check_admits(annotated(name), alpha, 6).ok


def test_annotation_size_limit():
    with pytest.raises(AnnotationTooLarge):
        annotate_approximants(flow_normalize(corpus.load("shuffle3")), 4, max_states=100)


def test_tightness_probe_returns_every_visited_state():
    ann = annotate_approximants(flow_normalize(corpus.load("dup")), 2)
    found = tightness_probe(ann, 2, max_len=4)
    assert set(found) <= set(ann.states)
    assert all(len(v) == 2 for v in found.values())
