"""Reference implementations the tests compare against; deliberately naive."""

import itertools
from fractions import Fraction

import networkx as nx


def descendants(edges, node):
    g = nx.DiGraph()
    g.add_edges_from((p, c) for c, p in edges)
    return len(nx.descendants(g, node))


def root_path(edges, node):
    parent = dict(edges)
    out = []
    while node != 0:
        out.append(node)
        node = parent[node]
    return out


def ilp_by_enumeration(edges, bound, chi_min, chi_max, i_meas):
    """Max total bundling; ties go to lexicographically larger plans (ascending node id)."""
    nodes = sorted(c for c, _ in edges)
    lam = {n: descendants(edges, n) for n in nodes}
    paths = {n: root_path(edges, n) for n in nodes}
    best = None
    for point in itertools.product(range(chi_min, chi_max + 1), repeat=len(nodes)):
        g = dict(zip(nodes, point))
        if all(sum(Fraction(i_meas, 1 + lam[h]) * g[h] for h in paths[n]) <= bound for n in nodes):
            key = (sum(point), point)
            if best is None or key > best:
                best = key
    return None if best is None else (best[0], dict(zip(nodes, best[1])))
