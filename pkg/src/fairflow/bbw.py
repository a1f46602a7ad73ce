"""Best-of-both-worlds lotteries built around an affordable committee.

Payments that certify a committee ``W`` as affordable also define a
feasible flow saturating every member of ``W``.  Completing that flow to a
max flow and decomposing the resulting committee gives a GRP lottery
whose every outcome contains ``W``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from fairflow.core import ONE, ZERO, Instance, Lottery, RationalLike, parse_rational
from fairflow.errors import DimensionMismatch, UnaffordablePayments
from fairflow.flownet import (
    SINK,
    SOURCE,
    EntitlementNetwork,
    Flow,
    candidate_node,
    committee_of_flow,
    max_flow,
    network_representation,
    voter_node,
)
from fairflow.lottery import decompose


@dataclass(frozen=True)
class PaymentFunction:
    """``payments[i][c]``: what voter ``i`` pays towards candidate ``c``."""

    payments: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(parse_rational(x) for x in row) for row in self.payments)
        if len({len(row) for row in rows}) > 1:
            raise DimensionMismatch("payment rows have different lengths")
        object.__setattr__(self, "payments", rows)

    @classmethod
    def zeros(cls, n: int, m: int) -> PaymentFunction:
        return cls(tuple((ZERO,) * m for _ in range(n)))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[RationalLike]]) -> PaymentFunction:
        return cls(tuple(tuple(row) for row in rows))

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, c = index
        return self.payments[i][c]

    @property
    def n(self) -> int:
        return len(self.payments)

    @property
    def m(self) -> int:
        return len(self.payments[0]) if self.payments else 0

    def spent(self, i: int) -> Fraction:
        return sum(self.payments[i], ZERO)

    def collected(self, c: int) -> Fraction:
        return sum((row[c] for row in self.payments), ZERO)

    def funded(self) -> frozenset[int]:
        return frozenset(c for c in range(self.m) if self.collected(c) > 0)


def _check_shape(instance: Instance, pi: PaymentFunction) -> None:
    if pi.n != instance.n or (instance.n and pi.m != instance.m):
        raise DimensionMismatch(f"payments are {pi.n}x{pi.m}, instance is {instance.n}x{instance.m}")


def verify_affordability(instance: Instance, W: Iterable[int], pi: PaymentFunction) -> bool:
    """All four affordability conditions, checked exactly."""
    _check_shape(instance, pi)
    chosen = frozenset(W)
    if any(not 0 <= c < instance.m for c in chosen):
        raise DimensionMismatch("committee mentions candidates outside the instance")
    for i, A in enumerate(instance.approvals):
        row = pi.payments[i]
        if any(x < 0 for x in row):
            return False
        if any(row[c] != 0 for c in range(instance.m) if c not in A):
            return False
        if sum(row, ZERO) > instance.share:
            return False
    for c in range(instance.m):
        if pi.collected(c) != (ONE if c in chosen else ZERO):
            return False
    return True


def _price(budgets: list[Fraction]) -> Fraction | None:
    """Smallest ``rho`` with ``sum(min(b, rho)) == 1``, or None if unaffordable."""
    if sum(budgets, ZERO) < 1:
        return None
    remaining = ONE
    ordered = sorted(budgets)
    for idx, b in enumerate(ordered):
        payers = len(ordered) - idx
        if b * payers >= remaining:
            return remaining / payers
        remaining -= b
    raise AssertionError("unreachable: budgets cover the price")


def mes(instance: Instance) -> tuple[frozenset[int], PaymentFunction]:
    """Method of Equal Shares with approval utilities.

    Every voter starts with ``k/n``.  The candidate whose supporters can
    split a unit price most evenly (smallest per-voter cap ``rho``, ties by
    index) is bought next, until none is affordable or ``k`` are bought.
    """
    n, m = instance.n, instance.m
    budget = [instance.share] * n
    pay = [[ZERO] * m for _ in range(n)]
    W: list[int] = []
    while len(W) < instance.k:
        best: tuple[Fraction, int] | None = None
        for c in range(m):
            if c in W or not instance.supporters[c]:
                continue
            rho = _price([budget[i] for i in sorted(instance.supporters[c])])
            if rho is not None and (best is None or rho < best[0]):
                best = (rho, c)
        if best is None:
            break
        rho, c = best
        for i in instance.supporters[c]:
            charge = min(budget[i], rho)
            pay[i][c] = charge
            budget[i] -= charge
        W.append(c)
    return frozenset(W), PaymentFunction(tuple(tuple(row) for row in pay))


def _require_affordable(instance: Instance, W: frozenset[int], pi: PaymentFunction) -> None:
    if not verify_affordability(instance, W, pi):
        raise UnaffordablePayments("payments do not certify the committee as affordable")


def flow_from_payments(instance: Instance, pi: PaymentFunction) -> Flow:
    """The flow routing each payment along voter -> candidate arcs."""
    _check_shape(instance, pi)
    W = pi.funded()
    _require_affordable(instance, W, pi)
    net = network_representation(instance)
    values: dict = {arc: ZERO for arc in net.arcs}
    for i, A in enumerate(instance.approvals):
        for c in A:
            values[(voter_node(i), candidate_node(c))] = pi[i, c]
        values[(SOURCE, voter_node(i))] = pi.spent(i)
    for c in range(instance.m):
        values[(candidate_node(c), SINK)] = pi.collected(c)
    return Flow(values)


def complete_to_max_flow(net: EntitlementNetwork, f: Flow) -> Flow:
    """A max flow dominating ``f`` on every candidate -> sink arc."""
    return max_flow(net, warm_start=f)


def top_up(instance: Instance, p: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Raise ``p`` to total mass ``k`` in descending approval score (ties by index)."""
    q = list(p)
    order = sorted(range(instance.m), key=lambda c: (-instance.approval_scores[c], c))
    for c in order:
        delta = instance.k - sum(q, ZERO)
        if delta <= 0:
            break
        q[c] = min(ONE, q[c] + delta)
    return tuple(q)


def bbw_marginals(instance: Instance, W: Iterable[int], pi: PaymentFunction) -> tuple[Fraction, ...]:
    chosen = frozenset(W)
    _require_affordable(instance, chosen, pi)
    net = network_representation(instance)
    completed = complete_to_max_flow(net, flow_from_payments(instance, pi))
    return top_up(instance, committee_of_flow(net, completed))


def bbw_lottery(instance: Instance, W: Iterable[int], pi: PaymentFunction) -> Lottery:
    """GRP lottery whose every committee contains the affordable committee ``W``."""
    return decompose(list(bbw_marginals(instance, W, pi)), instance.k)
