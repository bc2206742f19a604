"""Small worked examples for flows, closures and gap updates, checked value by value."""
from sstlab import corpus
from sstlab.approximants import effect_word, gap_extract, gap_update
from sstlab.core import Reg, Update, flow_of, is_idempotent_flow
from sstlab.lattice import UNIVERSAL, closure_word, period, periodic, single, subset
from sstlab.normalize import is_non_erasing, is_non_permuting

REGS = ("x1", "x2", "x3")


def fgh_updates():
    steps = {(t.source, t.label): t.update for t in corpus.load("fgh").transitions}
    return steps[("p0", "a")], steps[("p0", "b")], steps[("p1", "a")]


def test_erasing_permuting_and_normal_updates():
    f, g, h = fgh_updates()
    assert flow_of(f).as_dict() == {"x1": ["x1", "x3"], "x2": [], "x3": []}
    assert not is_non_erasing(f)
    assert is_non_erasing(g) and not is_non_permuting(g)
    assert is_non_erasing(h) and is_non_permuting(h)


def test_merge_shape_flow_is_idempotent():
    merge = Update.from_map(REGS, {"x1": "", "x2": "", "x3": "x1 x2 x3"})
    assert is_idempotent_flow(flow_of(merge))


def test_period_and_closures():
    assert period("abcab") == 3
    assert closure_word("aba", 3) == single("aba")
    assert closure_word("ababa", 3) == periodic("ab", "a")
    assert closure_word("abbb", 3) == UNIVERSAL
    assert subset(single("a"), periodic("ab", "a"))


def test_gap_update_and_effect_word():
    # s, u, t, v stand for the letters of a two-register update
    f = Update.from_map(("x1", "x2"), {"x1": "s x1 u x2 t", "x2": "v"})
    assert str(gap_update(f)) == "{y0 := y0 s; y1 := u; y2 := t y1 v y2}"
    assert " ".join(map(str, effect_word(f))) == "y0 s x1 u x2 t y1 v y2"
    w = ("s", Reg("x1"), "u", Reg("x2"), "t")
    assert gap_extract(w, 0, ("x1", "x2")) == ("s",)
    assert gap_extract(("s", Reg("x1"), "t"), 1, ("x1", "x2")) == ("t",)
    assert gap_extract(("s", Reg("x1"), "t"), 2, ("x1", "x2")) == ()
