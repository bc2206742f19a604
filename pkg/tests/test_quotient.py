import pytest
from machines import annotated

from sstlab import corpus
from sstlab.core import evaluate, well_formed_inputs
from sstlab.equivalence import edge_ambiguity
from sstlab.quotient import (FreshStart, is_transient, make_initials_transient, quotient_letter, quotient_prune,
                             quotient_word)


def test_initial_copies_are_never_entered():
    dup = corpus.load("dup")
    assert not is_transient(dup)
    t = make_initials_transient(dup)
    assert is_transient(t)
    assert t.initial == {FreshStart("q0")}
    assert make_initials_transient(t) is t
    for u in well_formed_inputs("a", 5):
        assert evaluate(t, u) == evaluate(dup, u)


def test_doubler_quotient_example():
    q = quotient_word(make_initials_transient(corpus.load("dup")), "aa")
    assert evaluate(q, "$") == {"aaaa"}
    assert evaluate(q, "a$") == {"aaaaaa"}


@pytest.mark.parametrize("name", corpus.bundled_names())
def test_quotient_shifts_the_input(name):
    t = make_initials_transient(corpus.load(name))
    letters = t.letters()
    for u in ("a", "ab", "ba"):
        if not set(u) <= set(letters):
            continue
        q = quotient_word(t, u)
        for v in well_formed_inputs(letters, 3):
            assert evaluate(q, v) == evaluate(t, u + v)


def test_quotient_rejects_bad_letters():
    t = make_initials_transient(corpus.load("dup"))
    with pytest.raises(ValueError):
        quotient_letter(t, "$")
    with pytest.raises(ValueError):
        quotient_letter(t, "b")
    with pytest.raises(ValueError):
        quotient_letter(corpus.load("dup"), "a")


def test_quotient_then_prune_keeps_outputs_and_bounds_ambiguity():
    ann = make_initials_transient(annotated("twins"))
    q = quotient_prune(ann, "aa", 2)
    assert edge_ambiguity(q) <= 2 * 2 ** ann.m
    for v in well_formed_inputs("a", 4):
        assert evaluate(q, v) == evaluate(ann, "aa" + v)
