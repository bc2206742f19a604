"""Word equations from machine schemas.

Replacing every output letter of a machine by an unknown gives a schema. Two
schemas produce the same outputs on an input when a system of word equations
holds. The test set check asks whether one more input length adds anything
to that system.

Run: python3 demos/word_equations.py
"""
from sstlab import corpus
from sstlab.wordeq import (EqSystem, build_system, format_system, parse_system, schema_of, solve_bounded,
                           solve_nielsen)
from sstlab.wordeq import testset

s = schema_of(corpus.load("ab"), "U", "1")
t = schema_of(corpus.load("ab"), "V", "2")
print("schema unknowns:", [str(x) for x in s.unknowns()], "with values", {str(k): v for k, v in s.phi.items()})
print("\nclause for input a$ and 2 outputs:")
print(format_system(EqSystem((build_system(s, t, 2, "a$"),))))

sys_ = parse_system("X a b = b a X")
print("X a b = b a X, bounded search:", {str(k): v for k, v in solve_bounded(sys_, 3).items()})
print("X a = b X, Nielsen transformation:", solve_nielsen(list(parse_system("X a = b X").clauses[0].options[0]), 20).status)

dup = schema_of(corpus.load("dup"))
print("\ntest set check on the doubler:", testset.testset_fixpoint(dup, dup, 1, 2, 2).verdict)
