"""Exact max-flow / min-cut solver for template flow networks.

Dinic's algorithm over a CSR adjacency built from the arc lists. The level
graph bounds the number of phases by the node count, so termination does not
depend on capacity values; for integer-valued capacities all arithmetic is
exact in float64. The JIT-compiled kernels keep the default template size
(2400 interior nodes, ~10k arcs) comfortably inside a real-time budget.

The returned source side is the set of nodes reachable from the source in
the final residual graph. Among all minimum cuts this is the canonical
minimal one, which makes results deterministic when ties exist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .radial import FlowNetwork

__all__ = ["CutResult", "max_flow_min_cut"]


@dataclass(frozen=True)
class CutResult:
    """Outcome of a min-cut: the flow value and the per-interior-node side."""

    max_flow_value: float
    source_side: np.ndarray  # (num_interior,) bool
    cut_capacity: float      # sum of original capacities crossing the cut


@njit(cache=True, nogil=True)
def _dinic(first, to, rev, cap, s, t):
    n = first.shape[0] - 1
    level = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    it = np.empty(n, np.int64)
    path = np.empty(n + 1, np.int64)
    total = 0.0
    while True:
        for i in range(n):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        qh, qt = 0, 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            for e in range(first[u], first[u + 1]):
                if cap[e] > 0.0:
                    v = to[e]
                    if level[v] < 0:
                        level[v] = level[u] + 1
                        queue[qt] = v
                        qt += 1
        if level[t] < 0:
            return total
        for i in range(n):
            it[i] = first[i]
        depth = 0
        u = s
        while True:
            if u == t:
                bottleneck = np.inf
                for d in range(depth):
                    e = path[d]
                    if cap[e] < bottleneck:
                        bottleneck = cap[e]
                for d in range(depth):
                    e = path[d]
                    cap[e] -= bottleneck
                    cap[rev[e]] += bottleneck
                total += bottleneck
                d0 = 0
                while d0 < depth and cap[path[d0]] > 0.0:
                    d0 += 1
                depth = d0
                u = s if depth == 0 else to[path[depth - 1]]
                continue
            advanced = False
            e = it[u]
            while e < first[u + 1]:
                v = to[e]
                if cap[e] > 0.0 and level[v] == level[u] + 1:
                    it[u] = e
                    path[depth] = e
                    depth += 1
                    u = v
                    advanced = True
                    break
                e += 1
            if not advanced:
                it[u] = first[u + 1]
                level[u] = -1
                if depth == 0:
                    break
                depth -= 1
                u = s if depth == 0 else to[path[depth - 1]]


@njit(cache=True, nogil=True)
def _residual_reachable(first, to, cap, s):
    n = first.shape[0] - 1
    reached = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int32)
    reached[s] = True
    queue[0] = s
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        for e in range(first[u], first[u + 1]):
            if cap[e] > 0.0:
                v = to[e]
                if not reached[v]:
                    reached[v] = True
                    queue[qt] = v
                    qt += 1
    return reached


def _build_csr(net: FlowNetwork):
    """CSR adjacency with paired residual arcs, in deterministic order."""
    n = net.num_interior + 2
    m = net.num_arcs
    tails = np.concatenate([net.tails, net.heads]).astype(np.int64)
    heads = np.concatenate([net.heads, net.tails]).astype(np.int64)
    caps = np.concatenate([np.asarray(net.caps, np.float64), np.zeros(m)])
    rev = np.concatenate([np.arange(m, 2 * m), np.arange(0, m)])
    order = np.argsort(tails, kind="stable")
    pos = np.empty(2 * m, np.int64)
    pos[order] = np.arange(2 * m)
    first = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(tails, minlength=n), out=first[1:])
    return first, heads[order], pos[rev[order]], caps[order], order


def max_flow_min_cut(net: FlowNetwork) -> CutResult:
    """Compute the exact maximum flow and the minimal source-side node set.

    Deterministic for identical inputs: arcs are scanned in a fixed order
    derived from the network's arc list.
    """
    if np.any(np.asarray(net.caps) < 0):
        raise ValueError("capacities must be non-negative")
    first, to, rev, cap, order = _build_csr(net)
    residual = cap.copy()
    flow = _dinic(first, to, rev, residual, net.source, net.sink)
    reached = _residual_reachable(first, to, residual, net.source)
    # capacity of the cut induced by residual reachability, summed over the
    # original (forward) arcs in input order
    src_side_all = np.zeros(net.num_interior + 2, bool)
    src_side_all[:] = reached
    crossing = src_side_all[net.tails] & ~src_side_all[net.heads]
    cut_capacity = float(np.asarray(net.caps, np.float64)[crossing].sum())
    return CutResult(max_flow_value=float(flow),
                     source_side=reached[:net.num_interior].copy(),
                     cut_capacity=cut_capacity)


def warm_up() -> None:
    """Trigger JIT compilation on a trivial network (first call is slow)."""
    tiny = FlowNetwork(num_interior=1,
                       tails=np.array([1, 0], np.int32),
                       heads=np.array([0, 2], np.int32),
                       caps=np.array([1.0, 1.0]),
                       inf_cap=4.0)
    max_flow_min_cut(tiny)
