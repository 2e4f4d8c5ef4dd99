"""Structural descriptors of a lexical network.

Everything is computed with exact algorithms (BFS, triangle counting,
power iteration); path-based measures operate on the largest connected
component, and graphs too degenerate for a measure yield 0 so feature
rows stay complete.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .netbuild import induced_subgraph

STRUCTURAL_FEATURE_NAMES = (
    "n_nodes",
    "n_edges",
    "density",
    "avg_local_clustering",
    "aspl_lcc",
    "diameter_lcc",
    "pagerank_centralisation",
)


@dataclass(frozen=True)
class StructuralFeatures:
    n_nodes: int
    n_edges: int
    density: float
    avg_local_clustering: float
    aspl_lcc: float
    diameter_lcc: int
    pagerank_centralisation: float
    n_components: int

    def as_feature_dict(self):
        """The seven descriptors used as regression predictors."""
        return {name: float(getattr(self, name)) for name in STRUCTURAL_FEATURE_NAMES}

    def as_dict(self):
        d = self.as_feature_dict()
        d["n_components"] = float(self.n_components)
        return d


def components(net):
    """Connected components, largest first, ties by smallest member lemma."""
    adj = net.adjacency()
    seen = set()
    comps = []
    for start in sorted(net.nodes):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            cur = queue.popleft()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    comp.add(nxt)
                    queue.append(nxt)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def density(net):
    n = net.n_nodes
    if n < 2:
        return 0.0
    return 2.0 * net.n_edges / (n * (n - 1))


def avg_local_clustering(net):
    """Mean of 2*t_i / (k_i*(k_i-1)) over nodes of degree >= 2; 0 if none."""
    adj = net.adjacency()
    values = []
    for node, neigh in adj.items():
        k = len(neigh)
        if k < 2:
            continue
        links = sum(len(neigh & adj[u]) for u in neigh) // 2
        values.append(2.0 * links / (k * (k - 1)))
    if not values:
        return 0.0
    return sum(values) / len(values)


def _bfs_distances(adj, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        for nxt in adj[cur]:
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def _lcc(net):
    comps = components(net)
    return comps[0] if comps else set()


def aspl_lcc(net):
    """Mean BFS distance over ordered node pairs of the LCC; 0 when |LCC| <= 1."""
    lcc = _lcc(net)
    n = len(lcc)
    if n <= 1:
        return 0.0
    adj = net.adjacency()
    total = 0
    for node in lcc:
        dist = _bfs_distances(adj, node)
        total += sum(d for other, d in dist.items() if other in lcc)
    return total / (n * (n - 1))


def diameter_lcc(net):
    lcc = _lcc(net)
    if len(lcc) <= 1:
        return 0
    adj = net.adjacency()
    best = 0
    for node in lcc:
        dist = _bfs_distances(adj, node)
        best = max(best, max(d for other, d in dist.items() if other in lcc))
    return best


def pagerank(net, damping=0.85, tol=1e-10, max_iter=1000):
    """Power iteration on the degree-normalised walk with uniform teleport.

    The walker follows an incident edge with probability `damping` and
    teleports uniformly otherwise.  Expects a connected graph (callers
    pass the LCC subgraph); stops when the L1 change drops below `tol`.
    """
    if not 0 < damping < 1:
        raise ValueError(f"damping must lie in (0, 1), got {damping}")
    n = net.n_nodes
    if n == 0:
        return {}
    if n == 1:
        return {next(iter(net.nodes)): 1.0}
    nodes = sorted(net.nodes)
    index = {node: i for i, node in enumerate(nodes)}
    src = np.empty(2 * net.n_edges, dtype=np.int64)
    dst = np.empty(2 * net.n_edges, dtype=np.int64)
    for pos, (a, b) in enumerate(sorted(net.edges)):
        src[2 * pos], dst[2 * pos] = index[a], index[b]
        src[2 * pos + 1], dst[2 * pos + 1] = index[b], index[a]
    deg = np.bincount(src, minlength=n).astype(float)
    if np.any(deg == 0):
        raise ValueError("pagerank expects a connected graph; pass the LCC subgraph")
    rank = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        contrib = rank / deg
        new = teleport + damping * np.bincount(dst, weights=contrib[src], minlength=n)
        residual = np.abs(new - rank).sum()
        rank = new
        if residual < tol:
            return {node: float(rank[index[node]]) for node in nodes}
    raise ConvergenceError(
        f"pagerank did not converge within {max_iter} iterations", residual=residual
    )


def pagerank_centralisation(net, damping=0.85, tol=1e-10, max_iter=1000):
    """Mean absolute deviation of LCC PageRank from uniform, over LCC size."""
    lcc = _lcc(net)
    n = len(lcc)
    if n <= 1:
        return 0.0
    ranks = pagerank(induced_subgraph(net, lcc), damping=damping, tol=tol, max_iter=max_iter)
    u = 1.0 / n
    s = sum(abs(r - u) for r in ranks.values())
    return s / n


def structural_features(net, damping=0.85):
    comps = components(net)
    return StructuralFeatures(
        n_nodes=net.n_nodes,
        n_edges=net.n_edges,
        density=density(net),
        avg_local_clustering=avg_local_clustering(net),
        aspl_lcc=aspl_lcc(net),
        diameter_lcc=diameter_lcc(net),
        pagerank_centralisation=pagerank_centralisation(net, damping=damping),
        n_components=len(comps),
    )


def features_csv_rows(features_by_story_builder):
    """Rows for the features CSV: one per (story, builder)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ["story_id", "builder"] + list(STRUCTURAL_FEATURE_NAMES) + ["n_components"]
    writer.writerow(header)
    for (story_id, builder), feats in features_by_story_builder.items():
        d = feats.as_dict()
        writer.writerow(
            [story_id, builder]
            + [repr(d[name]) for name in STRUCTURAL_FEATURE_NAMES]
            + [repr(d["n_components"])]
        )
    return out.getvalue()


def histogram_csv(values, bins=20):
    """Bin edges and counts for one feature/builder distribution."""
    arr = np.asarray(list(values), dtype=float)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["bin_left", "bin_right", "count"])
    if arr.size == 0:
        return out.getvalue()
    counts, edges = np.histogram(arr, bins=bins)
    for i, count in enumerate(counts):
        writer.writerow([repr(float(edges[i])), repr(float(edges[i + 1])), int(count)])
    return out.getvalue()
