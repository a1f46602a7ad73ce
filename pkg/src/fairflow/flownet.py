"""Exact-rational flow networks of the shape source -> voters -> candidates -> sink.

The network of an election gives every voter a source arc carrying its
entitlement, an unbounded arc to each approved candidate and a unit arc
from every candidate into the sink.  An optional dummy voter is linked to
all candidates, and optional integer costs on the candidate -> sink arcs
turn max-flow into min-cost max-flow.

Max flows are computed with shortest augmenting paths (Edmonds-Karp);
min-cost max flows with successive shortest paths using a label-correcting
search over the signed residual costs.  All arithmetic is on Fractions.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from fairflow.core import ONE, ZERO, Instance, parse_rational
from fairflow.errors import DimensionMismatch, InfeasibleWarmStart, MissingCosts, TooLarge

Node = tuple[str, int]
Arc = tuple[Node, Node]

SOURCE: Node = ("s", 0)
SINK: Node = ("t", 0)
DUMMY: Node = ("d", 0)


def voter_node(i: int) -> Node:
    return ("v", i)


def candidate_node(c: int) -> Node:
    return ("c", c)


ORACLE_MAX_VOTERS = 20


@dataclass(frozen=True)
class EntitlementNetwork:
    """Flow network built on an instance.

    ``entitlement[i]`` is the capacity of the source arc into voter ``i``.
    ``dummy`` (if not None) is the capacity into a dummy voter approving
    every candidate of the network.  ``costs[c]`` is the cost of the arc
    from candidate ``c`` into the sink.  ``candidates`` restricts which
    candidate nodes exist, and ``sink_caps`` overrides the unit capacities
    of the candidate -> sink arcs (used by the axiom checkers).
    """

    instance: Instance
    entitlement: tuple[Fraction, ...]
    dummy: Fraction | None = None
    costs: tuple[int, ...] | None = None
    candidates: frozenset[int] = field(default=None)  # type: ignore[assignment]
    sink_caps: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        inst = self.instance
        ent = tuple(parse_rational(x) for x in self.entitlement)
        if len(ent) != inst.n:
            raise DimensionMismatch(f"{len(ent)} entitlements for {inst.n} voters")
        if any(x < 0 for x in ent):
            raise ValueError("entitlements must be non-negative")
        object.__setattr__(self, "entitlement", ent)
        if self.dummy is not None:
            dummy = parse_rational(self.dummy)
            if dummy < 0:
                raise ValueError("dummy capacity must be non-negative")
            object.__setattr__(self, "dummy", dummy)
        cands = frozenset(range(inst.m)) if self.candidates is None else frozenset(self.candidates)
        if not cands <= frozenset(range(inst.m)):
            raise ValueError("restriction mentions candidates outside the instance")
        object.__setattr__(self, "candidates", cands)
        if self.costs is not None:
            costs = tuple(self.costs)
            if len(costs) != inst.m:
                raise DimensionMismatch(f"{len(costs)} costs for m={inst.m} candidates")
            present = [costs[c] for c in cands]
            if any(not isinstance(x, int) or x <= 0 for x in present):
                raise ValueError("candidate costs must be positive integers")
            if len(set(present)) != len(present):
                raise ValueError("candidate costs must be pairwise distinct (sink-distinct)")
            object.__setattr__(self, "costs", costs)
        if self.sink_caps is not None:
            caps = tuple(parse_rational(x) for x in self.sink_caps)
            if len(caps) != inst.m:
                raise DimensionMismatch(f"{len(caps)} sink capacities for m={inst.m} candidates")
            if any(not ZERO <= x <= ONE for x in caps):
                raise ValueError("sink capacities must lie in [0, 1]")
            object.__setattr__(self, "sink_caps", caps)

    @property
    def total_entitlement(self) -> Fraction:
        total = sum(self.entitlement, ZERO)
        return total + (self.dummy or ZERO)

    def is_entitlement_network(self) -> bool:
        """True when the source capacities sum to the committee size."""
        return self.total_entitlement == self.instance.k

    @cached_property
    def unbounded(self) -> Fraction:
        # no s-t flow can exceed the total source capacity, so this bound never binds
        return max(Fraction(self.instance.k), self.total_entitlement)

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        """All arcs in the fixed storage order: voters, dummy, then candidates ascending."""
        inst = self.instance
        cands = sorted(self.candidates)
        out: list[Arc] = [(SOURCE, voter_node(i)) for i in range(inst.n)]
        if self.dummy is not None:
            out.append((SOURCE, DUMMY))
        for i, ballot in enumerate(inst.approvals):
            out.extend((voter_node(i), candidate_node(c)) for c in cands if c in ballot)
        if self.dummy is not None:
            out.extend((DUMMY, candidate_node(c)) for c in cands)
        out.extend((candidate_node(c), SINK) for c in cands)
        return tuple(out)

    @cached_property
    def capacity(self) -> Mapping[Arc, Fraction]:
        caps: dict[Arc, Fraction] = {}
        for arc in self.arcs:
            u, v = arc
            if u == SOURCE:
                caps[arc] = self.dummy if v == DUMMY else self.entitlement[v[1]]
            elif v == SINK:
                caps[arc] = ONE if self.sink_caps is None else self.sink_caps[u[1]]
            else:
                caps[arc] = self.unbounded
        return caps

    def cost(self, arc: Arc) -> int:
        u, v = arc
        if self.costs is None or v != SINK:
            return 0
        return self.costs[u[1]]

    def source_nodes(self) -> list[Node]:
        nodes = [voter_node(i) for i in range(self.instance.n)]
        if self.dummy is not None:
            nodes.append(DUMMY)
        return nodes

    def approved(self, node: Node) -> frozenset[int]:
        """Candidates of the network reachable from a voter (or dummy) node."""
        if node == DUMMY:
            return self.candidates
        return self.instance.approvals[node[1]] & self.candidates


@dataclass(frozen=True, eq=False)
class Flow:
    """Per-arc flow values.  Arcs absent from ``values`` carry zero flow."""

    values: Mapping[Arc, Fraction]

    def __getitem__(self, arc: Arc) -> Fraction:
        return self.values.get(arc, ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Flow):
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return all(self[a] == other[a] for a in keys)

    @property
    def value(self) -> Fraction:
        return sum((x for (u, _), x in self.values.items() if u == SOURCE), ZERO)

    def sink_flow(self, c: int) -> Fraction:
        return self[(candidate_node(c), SINK)]

    def source_flow(self, i: int) -> Fraction:
        return self[(SOURCE, voter_node(i))]

    @classmethod
    def zero(cls, net: EntitlementNetwork) -> Flow:
        return cls({arc: ZERO for arc in net.arcs})


@dataclass(frozen=True)
class ResidualArc:
    tail: Node
    head: Node
    capacity: Fraction
    cost: int
    forward: bool


@dataclass(frozen=True)
class ResidualGraph:
    """Arcs with strictly positive residual capacity, plus their signed costs."""

    arcs: tuple[ResidualArc, ...]

    @cached_property
    def _adjacency(self) -> dict[Node, list[ResidualArc]]:
        adj: dict[Node, list[ResidualArc]] = {}
        for arc in self.arcs:
            adj.setdefault(arc.tail, []).append(arc)
        return adj

    def successors(self, node: Node) -> list[ResidualArc]:
        return self._adjacency.get(node, [])

    def __contains__(self, pair: object) -> bool:
        return any((a.tail, a.head) == pair for a in self.arcs)

    def capacity(self, tail: Node, head: Node) -> Fraction:
        return sum((a.capacity for a in self.arcs if (a.tail, a.head) == (tail, head)), ZERO)

    def shortest_path(self, src: Node = SOURCE, dst: Node = SINK) -> tuple[Node, ...] | None:
        """Fewest-arc path from ``src`` to ``dst`` (BFS), or None."""
        parent: dict[Node, Node | None] = {src: None}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if u == dst:
                path = [u]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])  # type: ignore[arg-type]
                return tuple(reversed(path))
            for arc in self.successors(u):
                if arc.head not in parent:
                    parent[arc.head] = u
                    queue.append(arc.head)
        return None

    def reachable(self, src: Node = SOURCE) -> frozenset[Node]:
        seen = {src}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for arc in self.successors(u):
                if arc.head not in seen:
                    seen.add(arc.head)
                    queue.append(arc.head)
        return frozenset(seen)


# --- construction ----------------------------------------------------------


def network_representation(instance: Instance) -> EntitlementNetwork:
    """The election's network: every voter is entitled to ``k/n``."""
    return EntitlementNetwork(instance, (instance.share,) * instance.n)


def restrict(net: EntitlementNetwork, T: Iterable[int]) -> EntitlementNetwork:
    """Drop every candidate outside ``T`` together with its arcs."""
    keep = frozenset(T)
    if not keep <= frozenset(range(net.instance.m)):
        raise ValueError("T must be a subset of the candidates")
    return replace(net, candidates=net.candidates & keep)


def restrict_flow(net: EntitlementNetwork, f: Flow, T: Iterable[int]) -> Flow:
    """``f`` restricted to ``restrict(net, T)``; source arcs follow by conservation."""
    sub = restrict(net, T)
    values: dict[Arc, Fraction] = {}
    for arc in sub.arcs:
        u, v = arc
        if u != SOURCE and v != SINK:
            values[arc] = f[arc]
    for node in sub.source_nodes():
        values[(SOURCE, node)] = sum((f[(node, candidate_node(c))] for c in sub.approved(node)), ZERO)
    for c in sub.candidates:
        values[(candidate_node(c), SINK)] = f[(candidate_node(c), SINK)]
    return Flow(values)


# --- feasibility -------------------------------------------------------------


def check_feasible(net: EntitlementNetwork, f: Flow) -> None:
    """Raise InfeasibleWarmStart unless ``f`` respects capacities and conservation."""
    caps = net.capacity
    for arc, x in f.values.items():
        if arc not in caps:
            if x != 0:
                raise InfeasibleWarmStart(f"flow {x} on arc {arc} absent from the network")
            continue
        if not ZERO <= x <= caps[arc]:
            raise InfeasibleWarmStart(f"flow {x} on arc {arc} violates capacity {caps[arc]}")
    balance: dict[Node, Fraction] = {}
    for (u, v), x in f.values.items():
        balance[u] = balance.get(u, ZERO) - x
        balance[v] = balance.get(v, ZERO) + x
    for node, b in balance.items():
        if node not in (SOURCE, SINK) and b != 0:
            raise InfeasibleWarmStart(f"conservation violated at {node}: imbalance {b}")


def is_feasible(net: EntitlementNetwork, f: Flow) -> bool:
    try:
        check_feasible(net, f)
    except InfeasibleWarmStart:
        return False
    return True


# --- working state shared by the solvers ------------------------------------


class _FlowState:
    """Mutable residual bookkeeping over integer node/arc ids."""

    def __init__(self, net: EntitlementNetwork, start: Flow | None = None, arc_order: Sequence[Arc] | None = None):
        arcs = tuple(net.arcs) if arc_order is None else tuple(arc_order)
        if arc_order is not None and sorted(arcs) != sorted(net.arcs):
            raise ValueError("arc_order must be a permutation of the network's arcs")
        self.net = net
        self.arcs = arcs
        nodes: dict[Node, int] = {}
        for u, v in arcs:
            nodes.setdefault(u, len(nodes))
            nodes.setdefault(v, len(nodes))
        nodes.setdefault(SOURCE, len(nodes))
        nodes.setdefault(SINK, len(nodes))
        self.node_id = nodes
        self.tail = [nodes[u] for u, _ in arcs]
        self.head = [nodes[v] for _, v in arcs]
        caps = net.capacity
        self.flow = [start[a] if start is not None else ZERO for a in arcs]
        self.slack = [caps[a] - x for a, x in zip(arcs, self.flow)]
        self.cost = [net.cost(a) for a in arcs]
        self.adj: list[list[tuple[int, bool]]] = [[] for _ in nodes]
        for j in range(len(arcs)):
            self.adj[self.tail[j]].append((j, True))
            self.adj[self.head[j]].append((j, False))
        self.s = nodes[SOURCE]
        self.t = nodes[SINK]

    def residual(self, j: int, forward: bool) -> Fraction:
        return self.slack[j] if forward else self.flow[j]

    def far_end(self, j: int, forward: bool) -> int:
        return self.head[j] if forward else self.tail[j]

    def bfs(self, src: int, dst: int, blocked: frozenset[int] = frozenset()) -> list[tuple[int, bool]] | None:
        """Fewest-arc residual path from ``src`` to ``dst`` avoiding ``blocked`` nodes."""
        parent: dict[int, tuple[int, int, bool] | None] = {src: None}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for j, fwd in self.adj[u]:
                if not (self.slack[j] if fwd else self.flow[j]):
                    continue
                w = self.head[j] if fwd else self.tail[j]
                if w in parent or w in blocked:
                    continue
                parent[w] = (u, j, fwd)
                if w == dst:
                    return self._unwind(parent, dst)
                queue.append(w)
        return None

    @staticmethod
    def _unwind(parent: dict, dst: int) -> list[tuple[int, bool]]:
        path = []
        node = dst
        while parent[node] is not None:
            u, j, fwd = parent[node]
            path.append((j, fwd))
            node = u
        path.reverse()
        return path

    def bottleneck(self, path: Iterable[tuple[int, bool]]) -> Fraction:
        return min(self.residual(j, fwd) for j, fwd in path)

    def push(self, path: Iterable[tuple[int, bool]], amount: Fraction) -> None:
        for j, fwd in path:
            if fwd:
                self.flow[j] += amount
                self.slack[j] -= amount
            else:
                self.flow[j] -= amount
                self.slack[j] += amount

    def augment_to_max(self) -> None:
        while True:
            path = self.bfs(self.s, self.t)
            if path is None:
                return
            self.push(path, self.bottleneck(path))

    def cheapest_path(self) -> list[tuple[int, bool]] | None:
        """Minimum-cost residual s-t path by label correction (queue-based Bellman-Ford)."""
        n_nodes = len(self.adj)
        dist: list[int | None] = [None] * n_nodes
        parent: list[tuple[int, int, bool] | None] = [None] * n_nodes
        hops = [0] * n_nodes
        dist[self.s] = 0
        queue = deque([self.s])
        queued = [False] * n_nodes
        queued[self.s] = True
        while queue:
            u = queue.popleft()
            queued[u] = False
            du = dist[u]
            for j, fwd in self.adj[u]:
                if not (self.slack[j] if fwd else self.flow[j]):
                    continue
                w = self.head[j] if fwd else self.tail[j]
                dw = du + (self.cost[j] if fwd else -self.cost[j])
                if dist[w] is None or dw < dist[w]:
                    dist[w] = dw
                    parent[w] = (u, j, fwd)
                    hops[w] = hops[u] + 1
                    # a path with n_nodes arcs would repeat a node: negative cycle
                    assert hops[w] < n_nodes, "negative-cost cycle in residual graph"
                    if not queued[w]:
                        queued[w] = True
                        queue.append(w)
        if dist[self.t] is None:
            return None
        path = []
        node = self.t
        while node != self.s:
            u, j, fwd = parent[node]  # type: ignore[misc]
            path.append((j, fwd))
            node = u
        path.reverse()
        return path

    def to_flow(self) -> Flow:
        ordered = {a: x for a, x in zip(self.arcs, self.flow)}
        return Flow({a: ordered[a] for a in self.net.arcs})


# --- algorithms -----------------------------------------------------------------


def max_flow(net: EntitlementNetwork, warm_start: Flow | None = None) -> Flow:
    """Maximum flow by shortest augmenting paths, optionally from ``warm_start``.

    Every augmentation ends in exactly one candidate -> sink arc and never
    decreases flow on sink arcs, so the result dominates ``warm_start``
    on every candidate.
    """
    if warm_start is not None:
        check_feasible(net, warm_start)
    state = _FlowState(net, warm_start)
    state.augment_to_max()
    return state.to_flow()


def max_flow_value(net: EntitlementNetwork) -> Fraction:
    return max_flow(net).value


def min_cost_max_flow(net: EntitlementNetwork, arc_order: Sequence[Arc] | None = None) -> Flow:
    """Min-cost max flow by successive shortest paths from the zero flow.

    ``arc_order`` permutes the internal arc storage; with sink-distinct
    costs the resulting candidate -> sink flows do not depend on it.
    """
    if net.costs is None:
        raise MissingCosts("min-cost max-flow needs candidate costs")
    state = _FlowState(net, None, arc_order)
    while True:
        path = state.cheapest_path()
        if path is None:
            break
        state.push(path, state.bottleneck(path))
    return state.to_flow()


def flow_cost(net: EntitlementNetwork, f: Flow) -> Fraction:
    return sum((net.cost(a) * f[a] for a in net.arcs), ZERO)


def residual(net: EntitlementNetwork, f: Flow) -> ResidualGraph:
    """Residual graph of ``f`` on ``net``: forward slack and backward flow arcs."""
    out: list[ResidualArc] = []
    for arc in net.arcs:
        u, v = arc
        cap, x, cost = net.capacity[arc], f[arc], net.cost(arc)
        if cap - x > 0:
            out.append(ResidualArc(u, v, cap - x, cost, True))
        if x > 0:
            out.append(ResidualArc(v, u, x, -cost, False))
    return ResidualGraph(tuple(out))


def min_cut_source_side(net: EntitlementNetwork, f: Flow | None = None) -> frozenset[int]:
    """Voters on the source side of the minimum cut found from a max flow.

    These are the voters reachable from the source in the residual graph of
    a maximum flow; the returned set attains the min-cut minimum.
    """
    flow = max_flow(net) if f is None else f
    reach = residual(net, flow).reachable()
    return frozenset(node[1] for node in reach if node[0] == "v")


def min_cut_value_oracle(net: EntitlementNetwork) -> Fraction:
    """Minimum s-t cut by enumerating every set of source-side voters.

    For each set ``T`` of voters (and dummy) left on the source side, the
    cut cost is the capacity of the source arcs into voters outside ``T``
    plus the sink capacity of all candidates approved by someone in ``T``.
    """
    if net.instance.n > ORACLE_MAX_VOTERS:
        raise TooLarge(f"min-cut enumeration limited to n <= {ORACLE_MAX_VOTERS}")
    nodes = net.source_nodes()
    caps = net.capacity
    source_cap = [caps[(SOURCE, v)] for v in nodes]
    approved = [net.approved(v) for v in nodes]
    sink_cap = {c: caps[(candidate_node(c), SINK)] for c in net.candidates}
    best: Fraction | None = None
    for r in range(len(nodes) + 1):
        for T in itertools.combinations(range(len(nodes)), r):
            inside = set(T)
            covered: set[int] = set()
            for j in T:
                covered |= approved[j]
            value = sum((source_cap[j] for j in range(len(nodes)) if j not in inside), ZERO)
            value += sum((sink_cap[c] for c in covered), ZERO)
            if best is None or value < best:
                best = value
    assert best is not None
    return best


def committee_of_flow(net: EntitlementNetwork, f: Flow) -> tuple[Fraction, ...]:
    """Marginals read off the candidate -> sink arcs (zero for removed candidates)."""
    return tuple(f.sink_flow(c) for c in range(net.instance.m))
