"""Zero eigenvalues, acyclicity and cycle covers on small graphs.

Run:  python3 demos/04_cycle_covers.py
"""

import numpy as np

from graphphase import DiGraph, acyclicity_index, decompose, gen_path, has_cycle_cover, perturb

graphs = {
    "path 0->1->2": gen_path(3),
    "path with loop at 1": DiGraph.from_edges(3, [(0, 1), (1, 2), (1, 1)]),
    "two 2-cycles and a bridge": DiGraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]),
}
for name, g in graphs.items():
    idx = acyclicity_index(g)
    rank = np.linalg.matrix_rank(np.linalg.matrix_power(g.adjacency, g.n))
    print(f"{name}: r = {idx.r}, zero eigenvalues = {g.n - rank}, cover = {has_cycle_cover(g)}")

print("\nafter perturbation every graph is invertible and so admits a cycle cover:")
rng = np.random.default_rng(0)
for trial in range(5):
    n = int(rng.integers(4, 15))
    g = DiGraph(np.tril(rng.random((n, n)) < 0.3, -1).astype(float))
    res = perturb(g)
    print(f"  DAG with {n} nodes: +{len(res.added_edges)} edges, cover = {has_cycle_cover(res.perturbed)}")
