"""Annotate a two-valued machine with approximants and drop redundant parallel edges.

The twins machine reads a^n and may append or prepend each a, then marks the
end with b on the left or on the right. Appending and prepending an a are
interchangeable while the register only holds a's, so one of them can go.

Run: python3 demos/approximants_and_pruning.py
"""
from sstlab import corpus
from sstlab.approximants import annotate_approximants, check_admits
from sstlab.core import capacity, evaluate, runs
from sstlab.equivalence import annotated_equiv, edge_ambiguity, prune_edges
from sstlab.normalize import flow_normalize

twins = corpus.load("twins")
print("outputs on aa$:", sorted(evaluate(twins, "aa$")), "from", len(runs(twins, "aa$")), "runs")

nt = flow_normalize(twins)
alpha = capacity(nt)
ann = annotate_approximants(nt, alpha)
print(f"annotated with alpha={alpha}: {len(ann.states)} states, {len(ann.transitions)} transitions")
print("annotation agrees with short runs:", check_admits(ann, alpha, 5).ok)

groups = {}
for t in ann.transitions:
    groups.setdefault((t.source, t.label, t.target), []).append(t)
pairs = [ts for ts in groups.values() if len(ts) == 2]
print(f"{len(pairs)} parallel pairs, e.g. at {pairs[0][0].source.describe()}")
print("  interchangeable:", annotated_equiv(ann, *pairs[0]))

pruned = prune_edges(ann, 2)
print(f"after pruning: {len(pruned.transitions)} transitions, edge ambiguity "
      f"{edge_ambiguity(ann)} -> {edge_ambiguity(pruned)}")
# gaps only become periodic (and so comparable) once they are longer than alpha
for n in range(2, 6):
    u = "a" * n + "$"
    print(f"runs on {u}: {len(runs(ann, u))} -> {len(runs(pruned, u))}")
print("outputs unchanged:", all(evaluate(pruned, u) == evaluate(twins, u) for u in ("$", "a$", "aa$", "aaa$", "aaaaa$")))
