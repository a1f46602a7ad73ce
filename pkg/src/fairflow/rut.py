"""Redistributive Utilitarian Rule.

Candidates enter a growing subnetwork in order of weighted approval
score.  After each insertion the max flow is rebalanced so that a voter's
source arc is saturated only when it has to be; voters left unsaturated
then gain weight until another candidate reaches the running score
ceiling.  The final flow is a max flow on the full network, so the
completed committee satisfies GRP, and it maximizes weighted welfare for
the final positive weights.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from fairflow.core import ONE, ZERO, FractionalCommittee, Instance
from fairflow.flownet import (
    SOURCE,
    EntitlementNetwork,
    Flow,
    _FlowState,
    check_feasible,
    committee_of_flow,
    network_representation,
    restrict,
    voter_node,
)


@dataclass(frozen=True)
class WeightState:
    """Voter weights at the end of one main-loop iteration."""

    weights: tuple[Fraction, ...]
    frozen: tuple[bool, ...]
    s_star: Fraction


@dataclass(frozen=True)
class RebalanceStep:
    """One call of the rebalancing max flow: the inserted prefix and its result."""

    inserted: tuple[int, ...]
    flow: Flow
    cycles: int


@dataclass(frozen=True)
class RutResult:
    committee: FractionalCommittee
    weights: tuple[Fraction, ...]
    flow: Flow
    steps: tuple[RebalanceStep, ...]
    states: tuple[WeightState, ...]

    def score(self, instance: Instance, c: int) -> Fraction:
        return sum((self.weights[i] for i in instance.supporters[c]), ZERO)


def _rebalance(net: EntitlementNetwork, T: frozenset[int], f_prev: Flow | None) -> tuple[Flow, int]:
    sub = restrict(net, T)
    if f_prev is not None:
        check_feasible(sub, f_prev)
    state = _FlowState(sub, f_prev)
    state.augment_to_max()

    inst = net.instance
    outside = [bool(inst.approvals[i] - T) for i in range(inst.n)]
    source_arc = {i: state.node_id[voter_node(i)] for i in range(inst.n)}
    arc_index = {arc: j for j, arc in enumerate(state.arcs)}
    blocked = frozenset({state.t})
    cycles = 0
    while True:
        pushed = False
        for i in range(inst.n):
            j = arc_index[(SOURCE, voter_node(i))]
            if not outside[i] or state.slack[j] or not state.flow[j]:
                continue
            # residual cycle s -> ... -> i, closed by the backward arc i -> s
            path = state.bfs(state.s, source_arc[i], blocked)
            if path is None:
                continue
            cycle = path + [(j, False)]
            state.push(cycle, state.bottleneck(cycle) / 2)
            cycles += 1
            pushed = True
            break
        if not pushed:
            break
    # each push removes one voter from the saturated set for good
    assert cycles <= inst.n, "rebalancing did not terminate within n cycles"
    return state.to_flow(), cycles


def rebalanced_max_flow(net: EntitlementNetwork, T: Iterable[int], f_prev: Flow | None = None) -> Flow:
    """Max flow on ``restrict(net, T)`` that saturates source arcs only when forced.

    Shortest-augmenting-path max flow from ``f_prev``, followed by pushing
    half the bottleneck around residual cycles that pass through a voter
    whose source arc is saturated although it approves a candidate outside
    ``T``.  Sink-arc flows never decrease, and the result admits no
    augmenting path longer than three arcs in the residual of ``net``.
    """
    return _rebalance(net, frozenset(T), f_prev)[0]


def _argmax(candidates: Iterable[int], score) -> int:
    best = None
    for c in candidates:
        if best is None or score(c) > score(best):
            best = c
    assert best is not None
    return best


def run_rut(instance: Instance) -> RutResult:
    """RUT with its full trace: final weights, the main-loop flows and states."""
    n, m, k = instance.n, instance.m, instance.k
    net = network_representation(instance)
    share = instance.share
    supporters = instance.supporters
    weights = [ONE] * n
    empty = [not A for A in instance.approvals]

    def score(c: int) -> Fraction:
        return sum((weights[i] for i in supporters[c]), ZERO)

    s_star = max(score(c) for c in range(m))
    inserted: list[int] = []
    remaining = set(range(m))
    flow: Flow | None = None
    steps: list[RebalanceStep] = []
    states: list[WeightState] = []
    while len(inserted) < m:
        c_j = _argmax(sorted(remaining), score)
        inserted.append(c_j)
        remaining.discard(c_j)
        T = frozenset(inserted)
        flow, cycles = _rebalance(net, T, flow)
        steps.append(RebalanceStep(tuple(inserted), flow, cycles))
        V = [i for i in range(n) if flow.source_flow(i) < share]
        full = frozenset(c for c in T if flow.sink_flow(c) == 1)
        frozen = tuple(i not in V or empty[i] for i in range(n))
        if all(instance.approvals[i] <= full for i in V):
            states.append(WeightState(tuple(weights), frozen, s_star))
            break
        Vset = frozenset(V)
        gaps = []
        for c in sorted(remaining):
            reach = len(supporters[c] & Vset)
            if reach:
                gaps.append((s_star - score(c)) / reach)
        assert gaps, "exit condition must fire when no open candidate reaches an unsaturated voter"
        alpha = min(gaps)
        for i in V:
            if not empty[i]:
                weights[i] += alpha
        states.append(WeightState(tuple(weights), frozen, s_star))
    assert flow is not None

    p = list(committee_of_flow(net, flow))
    while True:
        delta = k - sum(p, ZERO)
        if delta <= 0:
            break
        c = _argmax((c for c in range(m) if p[c] < 1), score)
        p[c] = min(ONE, p[c] + delta)
    return RutResult(FractionalCommittee(tuple(p)), tuple(weights), flow, tuple(steps), tuple(states))


def rut(instance: Instance) -> FractionalCommittee:
    """GRP and Pareto-efficient fractional committee of size ``k``."""
    return run_rut(instance).committee


def efficiency_certificate(instance: Instance, p: FractionalCommittee, weights: Iterable[Fraction]) -> bool:
    """True when ``p`` is a weighted-score greedy committee for ``weights``.

    Fractional candidates share one score, full candidates score at least
    as high as any non-full one, and selected candidates score at least as
    high as unselected ones.  Such a ``p`` maximizes weighted welfare.
    """
    w = tuple(weights)
    if any(x <= 0 for x in w):
        return False
    scores = [sum((w[i] for i in instance.supporters[c]), ZERO) for c in range(instance.m)]
    fractional = {scores[c] for c in range(instance.m) if 0 < p[c] < 1}
    if len(fractional) > 1:
        return False
    full = [scores[c] for c in range(instance.m) if p[c] == 1]
    below = [scores[c] for c in range(instance.m) if p[c] < 1]
    if full and below and min(full) < max(below):
        return False
    chosen = [scores[c] for c in range(instance.m) if p[c] > 0]
    unchosen = [scores[c] for c in range(instance.m) if p[c] == 0]
    if chosen and unchosen and min(chosen) < max(unchosen):
        return False
    return True
