"""Random graph, partition and function generators shared by the tests."""

from collections import deque

import numpy as np

from graphpde import Problem, build_graph, compute_boundary


def random_connected_graph(rng, n_min=5, n_max=50, measure_mode="derived"):
    """Random spanning tree plus extra edges, weights in [0.1, 10]."""
    n = int(rng.integers(n_min, n_max + 1))
    ids = [f"v{i}" for i in range(n)]
    edges = {}
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges[(j, i)] = float(rng.uniform(0.1, 10.0))
    for _ in range(int(rng.integers(0, n))):
        a, b = sorted(int(k) for k in rng.integers(0, n, size=2))
        if a != b and (a, b) not in edges:
            edges[(a, b)] = float(rng.uniform(0.1, 10.0))
    edge_list = [(ids[a], ids[b], w) for (a, b), w in sorted(edges.items())]
    measures = None
    if measure_mode == "given":
        measures = {vid: float(rng.uniform(0.1, 10.0)) for vid in ids}
    return build_graph(ids, edge_list, measure_mode=measure_mode, measures=measures)


def bfs_order(graph, start=0):
    seen = [False] * graph.n
    seen[start] = True
    order = [start]
    queue = deque([start])
    while queue:
        i = queue.popleft()
        nbr, _ = graph.neighbors(i)
        for j in nbr:
            j = int(j)
            if not seen[j]:
                seen[j] = True
                order.append(j)
                queue.append(j)
    return order


def random_partition(rng, graph):
    """Connected interior (a BFS prefix) with nonempty boundary."""
    order = bfs_order(graph, int(rng.integers(0, graph.n)))
    k = int(rng.integers(1, graph.n))
    omega = [graph.vertex_ids[i] for i in order[:k]]
    return compute_boundary(graph, omega)


def random_dirichlet(rng, graph, partition, scale=2.0):
    u = np.zeros(graph.n)
    u[partition.omega] = rng.uniform(-scale, scale, size=partition.omega.size)
    return u


def path_graph(ids, weights=None, measure_mode="derived", measures=None):
    ids = list(ids)
    if weights is None:
        weights = [1.0] * (len(ids) - 1)
    edges = [(ids[k], ids[k + 1], float(w)) for k, w in enumerate(weights)]
    return build_graph(ids, edges, measure_mode=measure_mode, measures=measures)


def three_path_problem(nl, h0=1.0, h_value=1.0):
    """Unit 3-path with interior {b} and constant coefficient h."""
    graph = path_graph("abc")
    partition = compute_boundary(graph, ["b"])
    h = np.full(3, float(h_value))
    return Problem(graph=graph, partition=partition, h=h, nl=nl, h0=h0)


def bisect(fn, lo, hi, tol=1e-15, max_iter=200):
    """Scalar root by bisection; fn(lo) and fn(hi) must differ in sign."""
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    assert (flo < 0.0) != (fhi < 0.0), "bisection needs a sign change"
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo <= tol:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
