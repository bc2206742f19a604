import pytest
from oracles import naive_outputs, naive_run_count

from sstlab import corpus
from sstlab.core import (Reg, Run, Update, capacity, compose_flows, compose_updates, evaluate, find_loops, flow_of,
                         is_idempotent_flow, is_k_valued_bounded, pump, register_valuation, run_output, runs, trim,
                         validate, well_formed_inputs)
from sstlab.textio import parse_sst

REGS = ("x1", "x2")

# outputs and run counts computed with the naive simulator in tests/oracles.py, then frozen
FROZEN_OUTPUTS = {
    "ab": {"$": [""], "a$": ["a", "b"], "aa$": ["aa", "bb"], "aaa$": ["aaa", "bbb"]},
    "dup": {"$": [""], "a$": ["aa"], "aa$": ["aaaa"], "aaa$": ["aaaaaa"]},
    "fgh": {"$": [""], "a$": ["baba"], "ab$": ["abaaab"], "aba$": ["bababaabaab"]},
    "guess": {"$": [], "a$": ["a", "aa"], "ab$": ["aab", "abb"], "aba$": ["aabaa", "abba"]},
    "palindrome": {"$": [""], "a$": ["aa"], "ab$": ["abba"], "aba$": ["abaaba"]},
    "reset": {"$": [""], "a$": ["ba"], "ab$": ["aab"], "aba$": ["baaba"]},
    "reverse": {"$": [""], "a$": ["a"], "ab$": ["ba"], "aba$": ["aba"]},
    "shuffle3": {"$": [""], "a$": ["ba"], "ab$": ["aab"], "aba$": ["ababa"]},
    "swap": {"$": ["b"], "a$": ["ab"], "ab$": ["abb"], "aba$": ["abab"]},
    "twins": {"$": ["b"], "a$": ["ab", "ba"], "aa$": ["aab", "baa"], "aaa$": ["aaab", "baaa"]},
}
FROZEN_RUN_COUNTS = {"ab": 2, "dup": 1, "twins": 16}


def upd(mapping, regs=REGS):
    return Update.from_map(regs, mapping)


@pytest.mark.parametrize("name", sorted(FROZEN_OUTPUTS))
def test_eval_matches_frozen_values(name):
    t = corpus.load(name)
    for u, expected in FROZEN_OUTPUTS[name].items():
        assert sorted(evaluate(t, u)) == expected
        assert evaluate(t, u) == naive_outputs(t, u)


def test_run_counts():
    assert len(runs(corpus.load("dup"), "aa$")) == 1
    assert len(runs(corpus.load("ab"), "a$")) == 2
    assert len(runs(corpus.load("twins"), "aaa$")) == FROZEN_RUN_COUNTS["twins"]
    for name in ("ab", "guess", "twins"):
        t = corpus.load(name)
        for u in well_formed_inputs(t.letters(), 5):
            assert len(runs(t, u)) == naive_run_count(t, u)


def test_inputs_must_end_with_the_marker():
    dup = corpus.load("dup")
    with pytest.raises(ValueError):
        runs(dup, "aa")
    with pytest.raises(ValueError):
        evaluate(dup, "a$a$")
    with pytest.raises(ValueError):
        evaluate(dup, "b$")


def test_marker_alone_is_a_valid_input():
    assert evaluate(corpus.load("dup"), "$") == {""}


def test_validate_bundled_machines():
    for name, t in corpus.bundled().items():
        assert validate(t) == [], name


def test_validate_reports_copying_and_bad_labels():
    t = corpus.load("dup")
    bad = t.replace(transitions=list(t.transitions) + [
        type(t.transitions[0])("q0", "a", upd({"x1": "x1 x1"}), "q0"),
        type(t.transitions[0])("q0", "c", upd({}), "q0"),
    ])
    codes = [d.code for d in validate(bad)]
    assert "not-copyless" in codes
    assert "bad-label" in codes


def test_validate_rejects_input_after_the_marker():
    text = corpus.load("dup")
    t = parse_sst("""
        alphabet input: a $; alphabet output: a; registers: x1; output: x1;
        state q0 initial; state q1; state qf final;
        trans q0 -> q1 on $ { }
        trans q1 -> qf on a { }
    """)
    assert "marker" in [d.code for d in validate(t)]
    assert text is not None


def test_is_copyless():
    assert upd({"x1": "x1 a"}).is_copyless()
    assert not upd({"x1": "x1 x2"}).is_copyless()
    assert Update.identity(REGS).is_copyless()


def test_capacity():
    assert capacity(corpus.load("dup")) == 2
    t = corpus.load("dup")
    assert capacity(t.replace(transitions=[type(tr)(tr.source, tr.label, Update.identity(REGS), tr.target)
                                           for tr in t.transitions])) == 0
    assert upd({"x1": "a b x1", "x2": "c"}).letter_count() == 3


def test_compose_updates_applies_the_first_argument_first():
    f = upd({"x1": "x1 a", "x2": "x2 a"})
    g = upd({"x1": "x1 x2", "x2": ""})
    assert compose_updates(f, g) == upd({"x1": "x1 a x2 a", "x2": ""})


def test_flows():
    regs = ("x1", "x2", "x3")
    f = upd({"x1": "a x1 b x3 c", "x2": "", "x3": ""}, regs)
    assert flow_of(f).as_dict() == {"x1": ["x1", "x3"], "x2": [], "x3": []}
    assert flow_of(Update.identity(regs)).as_dict() == {x: [x] for x in regs}
    assert flow_of(upd({"x1": "x2 x1", "x2": ""})).as_dict() == {"x1": ["x2", "x1"], "x2": []}


def test_flow_of_the_doubler_steps():
    dup = corpus.load("dup")
    step_a, step_end = sorted(dup.transitions, key=lambda t: t.label != "a")
    both = compose_flows(flow_of(step_a.update), flow_of(step_end.update))
    assert both.as_dict() == {"x1": ["x1", "x2"], "x2": []}
    assert flow_of(compose_updates(step_a.update, step_end.update)) == both


def test_idempotent_flows():
    merge = flow_of(upd({"x1": "x1 x2", "x2": ""}))
    assert is_idempotent_flow(merge)
    assert compose_flows(merge, merge) == merge
    assert is_idempotent_flow(flow_of(Update.identity(REGS)))
    assert not is_idempotent_flow(flow_of(upd({"x1": "x2", "x2": "x1"})))
    regs = ("x1", "x2", "x3")
    assert is_idempotent_flow(flow_of(upd({"x1": "", "x2": "", "x3": "x1 x2 x3"}, regs)))


def test_register_valuation_along_a_run():
    run = runs(corpus.load("dup"), "aa$")[0]
    assert register_valuation(run, 0) == {"x1": "", "x2": ""}
    assert register_valuation(run, 2) == {"x1": "aa", "x2": "aa"}
    assert register_valuation(run, 3) == {"x1": "aaaa", "x2": ""}
    assert run_output(corpus.load("dup"), run) == "aaaa"


def test_run_update_splits():
    t = corpus.load("fgh")
    for run in runs(t, "abab$"):
        for i in range(len(run) + 1):
            assert run.update() == compose_updates(run.update(0, i), run.update(i))


def test_trim_drops_unreachable_states():
    dup = corpus.load("dup")
    assert trim(dup) == dup
    extra = dup.replace(states=set(dup.states) | {"lost"},
                        transitions=list(dup.transitions) + [type(dup.transitions[0])("lost", "a", upd({}), "q0")])
    trimmed = trim(extra)
    assert "lost" not in trimmed.states
    assert trimmed.transitions == dup.transitions


def test_k_valued_bounded():
    assert is_k_valued_bounded(corpus.load("dup"), 1, 8).ok
    report = is_k_valued_bounded(corpus.load("ab"), 1, 4)
    assert not report.ok and report.witness == "a$"
    assert is_k_valued_bounded(corpus.load("ab"), 2, 8).ok


def test_find_loops_on_the_doubler():
    run = runs(corpus.load("dup"), "aaa$")[0]
    assert find_loops(run) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert find_loops(Run("q0", (), REGS)) == []


def test_swap_loops_need_doubling():
    swap = parse_sst("""
        alphabet input: a $; alphabet output: a; registers: x1 x2; output: x1;
        state q0 initial; state qf final;
        trans q0 -> q0 on a { x1 := x2; x2 := x1; }
        trans q0 -> qf on $ { }
    """)
    run = runs(swap, "aa$")[0]
    loops = find_loops(run)
    assert (0, 1) not in loops and (0, 2) in loops


def test_pump():
    dup = corpus.load("dup")
    run = runs(dup, "aa$")[0]
    assert pump(run, [(0, 1)], 1) == run
    pumped = pump(run, [(0, 1)], 3)
    assert pumped.word == "aaaa$"
    assert pumped in runs(dup, pumped.word)
    with pytest.raises(ValueError):
        pump(run, [(0, 2), (1, 3)], 2)
    with pytest.raises(ValueError):
        pump(run, [(1, 3)], 2)


def test_register_names_are_references():
    assert upd({"x1": "x2 a"}).images[0] == (Reg("x2"), "a")
