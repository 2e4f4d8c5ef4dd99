"""Retention-parameterised spreading activation seeded at prompt words.

Each iteration a node keeps a fraction `retention` of its activation and
spreads the rest uniformly over its neighbours; degree-0 nodes keep
everything.  Total mass (initialised to the node count N at the seed) is
conserved, and on the seed's component the process converges to the
degree-proportional distribution, giving the closed-form check in
`stationary_oracle`.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .textpipe import match_prompts

DEFAULT_RETENTION = 0.5
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 100_000
TRACE_EXPORT_STEPS = 100


class MissingSeedError(KeyError):
    """Seed lemma is not a node of the network."""


@dataclass(frozen=True)
class ActivationState:
    values: dict[str, float]
    step: int

    def total(self):
        return sum(self.values.values())


@dataclass(frozen=True)
class ActivationTrace:
    seed: str
    retention: float
    seed_series: tuple[float, ...]
    stationary_alpha: float
    converged: bool
    steps_taken: int
    seed_in_network: bool = True
    mass_drift: float = 0.0


def _check_retention(retention):
    if not 0.0 < retention < 1.0:
        raise ValueError(f"retention must lie in (0, 1), got {retention}")


def _index_network(net):
    nodes = sorted(net.nodes)
    index = {node: i for i, node in enumerate(nodes)}
    m = len(net.edges)
    src = np.empty(2 * m, dtype=np.int64)
    dst = np.empty(2 * m, dtype=np.int64)
    for pos, (a, b) in enumerate(sorted(net.edges)):
        src[2 * pos], dst[2 * pos] = index[a], index[b]
        src[2 * pos + 1], dst[2 * pos + 1] = index[b], index[a]
    deg = np.bincount(src, minlength=len(nodes)).astype(float)
    return nodes, index, src, dst, deg


def _advance(values, retention, src, dst, deg, isolated):
    outflow = np.divide(
        (1.0 - retention) * values, deg, out=np.zeros_like(values), where=deg > 0
    )
    new = retention * values + np.bincount(dst, weights=outflow[src], minlength=values.size)
    new[isolated] = values[isolated]
    return new


def init_activation(net, seed):
    """All nodes at zero except the seed, which holds N = |nodes|."""
    if seed not in net.nodes:
        raise MissingSeedError(seed)
    n = float(net.n_nodes)
    return ActivationState(
        values={node: (n if node == seed else 0.0) for node in net.nodes}, step=0
    )


def step(state, net, retention):
    """One synchronous update of the whole activation vector."""
    _check_retention(retention)
    nodes, index, src, dst, deg = _index_network(net)
    values = np.array([state.values[node] for node in nodes])
    new = _advance(values, retention, src, dst, deg, deg == 0)
    return ActivationState(
        values={node: float(new[index[node]]) for node in nodes}, step=state.step + 1
    )


def run_to_stationarity(
    net,
    seed,
    retention=DEFAULT_RETENTION,
    tol=DEFAULT_TOLERANCE,
    max_iter=DEFAULT_MAX_ITER,
):
    """Iterate until the max per-node change drops below `tol`.

    Non-convergence is reported through the trace's `converged` flag, never
    silently.  `mass_drift` records the worst deviation of total mass from
    N seen while running.
    """
    _check_retention(retention)
    if seed not in net.nodes:
        raise MissingSeedError(seed)
    nodes, index, src, dst, deg = _index_network(net)
    isolated = deg == 0
    n = float(len(nodes))
    values = np.zeros(len(nodes))
    seed_idx = index[seed]
    values[seed_idx] = n
    series = [n]
    drift = 0.0
    converged = False
    steps = 0
    for steps in range(1, max_iter + 1):
        new = _advance(values, retention, src, dst, deg, isolated)
        delta = np.abs(new - values).max()
        drift = max(drift, abs(new.sum() - n))
        values = new
        series.append(float(values[seed_idx]))
        if delta < tol:
            converged = True
            break
    return ActivationTrace(
        seed=seed,
        retention=retention,
        seed_series=tuple(series),
        stationary_alpha=float(values[seed_idx]),
        converged=converged,
        steps_taken=steps,
        seed_in_network=True,
        mass_drift=drift,
    )


def stationary_oracle(net, seed):
    """Closed-form limit: N * deg(seed) / sum of degrees in seed's component.

    Degree-0 seeds keep the full mass N.
    """
    if seed not in net.nodes:
        raise MissingSeedError(seed)
    adj = net.adjacency()
    if not adj[seed]:
        return float(net.n_nodes)
    comp = {seed}
    stack = [seed]
    while stack:
        cur = stack.pop()
        for nxt in adj[cur]:
            if nxt not in comp:
                comp.add(nxt)
                stack.append(nxt)
    total_degree = sum(len(adj[u]) for u in comp)
    return net.n_nodes * len(adj[seed]) / total_degree


def _isolated_seed_trace(seed, retention, n):
    return ActivationTrace(
        seed=seed,
        retention=retention,
        seed_series=(float(n),),
        stationary_alpha=float(n),
        converged=True,
        steps_taken=0,
        seed_in_network=False,
        mass_drift=0.0,
    )


def prompt_alphas(
    story,
    nets,
    retention=DEFAULT_RETENTION,
    tol=DEFAULT_TOLERANCE,
    max_iter=DEFAULT_MAX_ITER,
):
    """Per-builder activation traces for the three prompt seeds.

    Seeds are the matched prompt nodes; a prompt lemma absent from a
    given builder's network is assigned the full initial mass alpha = N
    (the isolated-seed rule).  Returns {builder_tag: (trace1, trace2, trace3)}.
    """
    matches = match_prompts(story)
    out = {}
    for tag, net in nets.items():
        traces = []
        for match in matches:
            seed = match.matched_node if match.matched else match.prompt_lemma
            if seed in net.nodes:
                traces.append(
                    run_to_stationarity(net, seed, retention=retention, tol=tol, max_iter=max_iter)
                )
            else:
                traces.append(_isolated_seed_trace(seed, retention, net.n_nodes))
        out[tag] = tuple(traces)
    return out


def trajectory_csv(traces_by_story_builder, limit=TRACE_EXPORT_STEPS):
    """Long-format seed-activation series, first `limit` steps per trace."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["step", "story_id", "builder", "seed", "value"])
    for (story_id, builder), traces in traces_by_story_builder.items():
        for trace in traces:
            for step_no, value in enumerate(trace.seed_series[: limit + 1]):
                writer.writerow([step_no, story_id, builder, trace.seed, repr(float(value))])
    return out.getvalue()


def stationary_csv(traces_by_story_builder):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["story_id", "builder", "alpha1", "alpha2", "alpha3"])
    for (story_id, builder), traces in traces_by_story_builder.items():
        writer.writerow(
            [story_id, builder] + [repr(float(t.stationary_alpha)) for t in traces]
        )
    return out.getvalue()
