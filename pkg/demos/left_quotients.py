"""Left quotients: a machine that behaves on v as the original does on u v.

Run: python3 demos/left_quotients.py
"""
from sstlab import corpus
from sstlab.core import evaluate
from sstlab.quotient import make_initials_transient, quotient_word

fgh = make_initials_transient(corpus.load("fgh"))
for u in ("a", "ab", "aba"):
    q = quotient_word(fgh, u, prune_dead=True)
    v = "b$"
    print(f"quotient by {u!r}: {len(q.states)} states; on {v!r} gives {sorted(evaluate(q, v))}, "
          f"original on {u + v!r} gives {sorted(evaluate(fgh, u + v))}")
