"""Measure the calculus identities' floating-point error on random graphs.

Sweeps random connected graphs and reports the worst relative error seen
for the product rule, the summation-by-parts residual, and the agreement
of the edge-sum and vertex-sum Dirichlet energies.
"""

import argparse

import numpy as np

from graphpde import (
    compute_boundary,
    dirichlet_energy,
    edge_energy,
    gradient_form,
    green_residual,
    laplacian,
)
from graphpde.graphs import build_graph


def random_graph(rng, n, measure_mode):
    ids = [f"v{i}" for i in range(n)]
    edges = []
    order = rng.permutation(n)
    for i in range(1, n):
        a = ids[order[i]]
        b = ids[order[rng.integers(0, i)]]
        edges.append((a, b, float(rng.uniform(0.1, 10.0))))
    seen = {frozenset((a, b)) for a, b, _ in edges}
    for _ in range(n):
        i, j = rng.integers(0, n, size=2)
        if i != j and frozenset((ids[i], ids[j])) not in seen:
            seen.add(frozenset((ids[i], ids[j])))
            edges.append((ids[i], ids[j], float(rng.uniform(0.1, 10.0))))
    measures = None
    if measure_mode == "given":
        measures = {v: float(rng.uniform(0.1, 10.0)) for v in ids}
    return build_graph(ids, edges, measures=measures)


def interior_prefix(rng, graph):
    n = graph.n
    start = int(rng.integers(0, n))
    seen = [start]
    frontier = [start]
    marked = {start}
    while frontier:
        x = frontier.pop(0)
        for k in range(graph.adj_ptr[x], graph.adj_ptr[x + 1]):
            y = int(graph.adj_nbr[k])
            if y not in marked:
                marked.add(y)
                seen.append(y)
                frontier.append(y)
    size = int(rng.integers(1, n))
    return [graph.vertex_ids[i] for i in seen[:size]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = {"product_rule": 0.0, "green": 0.0, "energy_agreement": 0.0}

    for trial in range(args.trials):
        n = int(rng.integers(args.n_min, args.n_max + 1))
        mode = "derived" if trial % 2 == 0 else "given"
        graph = random_graph(rng, n, mode)
        part = compute_boundary(graph, interior_prefix(rng, graph))

        u = rng.uniform(-2.0, 2.0, size=n)
        v = rng.uniform(-2.0, 2.0, size=n)
        lhs = gradient_form(graph, u, v)
        rhs = 0.5 * (laplacian(graph, u * v) - u * laplacian(graph, v)
                     - v * laplacian(graph, u))
        scale = max(1.0, float(np.max(np.abs(lhs))))
        worst["product_rule"] = max(
            worst["product_rule"], float(np.max(np.abs(lhs - rhs))) / scale)

        w = np.where(part.omega_mask, rng.uniform(-2.0, 2.0, size=n), 0.0)
        e_vertex = dirichlet_energy(graph, part, w)
        worst["green"] = max(
            worst["green"],
            abs(green_residual(graph, part, u, w)) / max(1.0, e_vertex))
        e_edge = edge_energy(graph, part, w)
        worst["energy_agreement"] = max(
            worst["energy_agreement"],
            abs(e_vertex - e_edge) / max(1.0, e_vertex, e_edge))

    print(f"trials {args.trials}  vertices [{args.n_min}, {args.n_max}]  seed {args.seed}")
    for name, value in worst.items():
        print(f"worst {name:18s} relative error {value:.3e}")
    bound = 1e-12
    ok = all(value <= bound for value in worst.values())
    print(f"all within {bound:g}: {ok}")


if __name__ == "__main__":
    main()
