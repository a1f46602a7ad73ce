"""Generalized CUT and the manipulation harness around it.

A dummy voter holding ``k - val(N)`` of entitlement tops every max flow up
to mass ``k``.  With candidate costs increasing as approval score falls,
the min-cost max flow is the welfare-maximal GRP committee.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, replace
from fractions import Fraction

from fairflow.core import ONE, ZERO, FractionalCommittee, Instance, as_committee
from fairflow.flownet import (
    EntitlementNetwork,
    committee_of_flow,
    max_flow,
    min_cost_max_flow,
    network_representation,
)

DummyNetwork = EntitlementNetwork


def cost_order(instance: Instance) -> tuple[int, ...]:
    """Candidates by descending approval score, ties by ascending index."""
    scores = instance.approval_scores
    return tuple(sorted(range(instance.m), key=lambda c: (-scores[c], c)))


def build_dummy_network(instance: Instance) -> DummyNetwork:
    """The network with a dummy voter of capacity ``k - val(N)`` and rank costs."""
    base = network_representation(instance)
    val = max_flow(base).value
    costs = [0] * instance.m
    for rank, c in enumerate(cost_order(instance), start=1):
        costs[c] = rank
    return replace(base, dummy=instance.k - val, costs=tuple(costs))


def gcut(instance: Instance) -> FractionalCommittee:
    """Welfare-maximal fractional committee among those satisfying GRP."""
    net = build_dummy_network(instance)
    return FractionalCommittee(committee_of_flow(net, min_cost_max_flow(net)))


def sample_grp_committee(instance: Instance, seed: int) -> FractionalCommittee:
    """A random GRP committee: a random max flow padded to mass ``k``.

    The max flow is a random convex combination of min-cost max flows under
    random sink-distinct costs.  Any committee dominating a max flow
    satisfies GRP, so the padding may go anywhere below capacity.
    """
    rng = random.Random(seed)
    m, k = instance.m, instance.k
    base = network_representation(instance)
    p = [ZERO] * m
    draws = rng.randint(1, 3)
    raw = [rng.randint(1, 6) for _ in range(draws)]
    for w in raw:
        costs = list(range(1, m + 1))
        rng.shuffle(costs)
        flow = min_cost_max_flow(replace(base, costs=tuple(costs)))
        for c, x in enumerate(committee_of_flow(base, flow)):
            p[c] += Fraction(w, sum(raw)) * x
    for _ in range(2 * m):
        delta = k - sum(p, ZERO)
        if delta == 0:
            break
        open_ = [c for c in range(m) if p[c] < 1]
        c = rng.choice(open_)
        p[c] += min(ONE - p[c], delta * Fraction(rng.randint(1, 4), 4))
    for c in rng.sample(range(m), m):
        delta = k - sum(p, ZERO)
        if delta == 0:
            break
        p[c] += min(ONE - p[c], delta)
    return FractionalCommittee(tuple(p))


def excludable_utility(true_ballot: Iterable[int], reported: Iterable[int], p_reported: FractionalCommittee) -> Fraction:
    """Utility credited only for candidates in both the true and reported ballot."""
    q = as_committee(p_reported)
    credited = frozenset(true_ballot) & frozenset(reported)
    return sum((q[c] for c in credited), ZERO)


@dataclass(frozen=True)
class Manipulation:
    instance: Instance
    voter: int
    reported: frozenset[int]
    truthful_utility: Fraction
    manipulated_utility: Fraction
    misreport_true_utility: Fraction

    @property
    def gains(self) -> bool:
        """True when the misreport helps even under excludable crediting."""
        return self.manipulated_utility > self.truthful_utility

    @property
    def gains_unrestricted(self) -> bool:
        """True when the misreport raises the voter's true utility."""
        return self.misreport_true_utility > self.truthful_utility


def draw_misreport(rng: random.Random, m: int, ballot: frozenset[int]) -> frozenset[int]:
    """A subset, superset or arbitrary set of candidates, each with equal odds."""
    kind = rng.randrange(3)
    if kind == 0:
        return frozenset(c for c in ballot if rng.random() < 0.5)
    if kind == 1:
        return ballot | frozenset(c for c in range(m) if rng.random() < 0.5)
    return frozenset(c for c in range(m) if rng.random() < 0.5)


def excludable_manipulation(instance: Instance, voter: int, reported: Iterable[int]) -> Manipulation:
    truth = instance.approvals[voter]
    claim = frozenset(reported)
    honest = gcut(instance)
    lied = gcut(instance.with_ballot(voter, claim))
    return Manipulation(
        instance,
        voter,
        claim,
        sum((honest[c] for c in truth), ZERO),
        excludable_utility(truth, claim, lied),
        sum((lied[c] for c in truth), ZERO),
    )


def fuzz_excludable(instances: Iterable[Instance], seed: int, per_instance: int = 1) -> Iterator[Manipulation]:
    """Replayable stream of random misreports against GCUT."""
    rng = random.Random(seed)
    for instance in instances:
        for _ in range(per_instance):
            voter = rng.randrange(instance.n)
            reported = draw_misreport(rng, instance.m, instance.approvals[voter])
            yield excludable_manipulation(instance, voter, reported)
