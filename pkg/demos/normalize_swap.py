"""Flow normalization of a machine whose registers trade places.

Run: python3 demos/normalize_swap.py
"""
from sstlab import corpus
from sstlab.core import evaluate, flow_of
from sstlab.normalize import flow_normalize, is_flow_normalized
from sstlab.textio import printable

swap = corpus.load("swap")
print("original machine, flow normalized:", is_flow_normalized(swap))
for t in swap.transitions:
    print(f"  {t}   flow {flow_of(t.update).as_dict()}")

# reading a swaps x1 and x2, so the update permutes registers; normalization
# records in each state which original register sits in which slot
nt = flow_normalize(swap)
print("\nnormalized machine, flow normalized:", is_flow_normalized(nt))
print(printable(nt))

for u in ("$", "a$", "ab$", "abab$"):
    print(f"{u:6} -> {sorted(evaluate(swap, u))}  /  {sorted(evaluate(nt, u))}")
