"""Fairness axioms for fractional committees.

Every axiom has a polynomial flow-based checker.  GRP and GFS also have
definitional oracles that enumerate all voter groups, used to cross-check
the flow formulations on small instances.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from fairflow.core import ZERO, FractionalCommittee, Instance, RationalLike, as_committee
from fairflow.errors import InvalidCommittee, TooLarge
from fairflow.flownet import (
    EntitlementNetwork,
    max_flow,
    min_cut_source_side,
    network_representation,
)

ORACLE_MAX_VOTERS = 15
ENUMERATION_MAX_GROUP = 12

CommitteeLike = FractionalCommittee | Sequence[RationalLike]


@dataclass(frozen=True)
class AxiomVerdict:
    """Outcome of an axiom check.

    On a violation ``witness`` is a voter group breaking the axiom, with
    ``coverage`` the mass it receives and ``required`` the mass it is owed.
    For GRP, ``penalty_set`` is the subgroup attaining the feasibility
    penalty; for PJR, ``cohesion`` is the violated level.
    """

    satisfied: bool
    witness: frozenset[int] | None = None
    coverage: Fraction | None = None
    required: Fraction | None = None
    penalty_set: frozenset[int] | None = None
    cohesion: int | None = None

    def __bool__(self) -> bool:
        return self.satisfied


def coverage(instance: Instance, p: CommitteeLike, S: Iterable[int]) -> Fraction:
    """Mass ``p`` places on candidates approved by at least one member of ``S``."""
    q = as_committee(p)
    union: set[int] = set()
    for i in S:
        union |= instance.approvals[i]
    return sum((q[c] for c in union), ZERO)


def utilitarian_welfare(instance: Instance, p: CommitteeLike) -> Fraction:
    q = as_committee(p, instance)
    return sum((score * x for score, x in zip(instance.approval_scores, q)), ZERO)


# --- GRP ---------------------------------------------------------------------


def _group_network(instance: Instance, S: Iterable[int]) -> EntitlementNetwork:
    members = frozenset(S)
    ent = tuple(instance.share if i in members else ZERO for i in range(instance.n))
    return EntitlementNetwork(instance, ent)


def grp_rhs(instance: Instance, S: Iterable[int]) -> Fraction:
    """What the group ``S`` is owed: ``|S|k/n`` minus its best feasibility penalty.

    The penalty is ``max over T subset of S of |T|k/n - |union of A_i, i in T|``.
    Small groups are enumerated; larger ones use a min cut on the network
    where only members of ``S`` hold entitlement.
    """
    members = sorted(set(S))
    if len(members) <= ENUMERATION_MAX_GROUP:
        share = instance.share
        best = ZERO
        for r in range(1, len(members) + 1):
            for T in itertools.combinations(members, r):
                union = frozenset().union(*(instance.approvals[i] for i in T))
                best = max(best, r * share - len(union))
        return len(members) * share - best
    return max_flow(_group_network(instance, members)).value


def _penalty_set(instance: Instance, S: frozenset[int]) -> frozenset[int]:
    net = _group_network(instance, S)
    return min_cut_source_side(net) & S


def check_grp(instance: Instance, p: CommitteeLike) -> AxiomVerdict:
    """GRP holds iff capping the sink arcs at ``p`` keeps the max-flow value.

    On failure the witness is the voter side of a minimum cut in the capped
    network; such a group always violates the defining inequality.
    """
    q = as_committee(p, instance)
    base = network_representation(instance)
    target = max_flow(base).value
    capped = replace(base, sink_caps=q.p)
    f = max_flow(capped)
    if f.value == target:
        return AxiomVerdict(True)
    S = min_cut_source_side(capped, f)
    required = grp_rhs(instance, S)
    return AxiomVerdict(
        False,
        witness=S,
        coverage=coverage(instance, q, S),
        required=required,
        penalty_set=_penalty_set(instance, S),
    )


def _bitmask_tables(instance: Instance) -> tuple[list[int], list[int]]:
    """Candidate-union and candidate-intersection masks for every voter mask."""
    n = instance.n
    ballots = [sum(1 << c for c in A) for A in instance.approvals]
    full = (1 << instance.m) - 1
    union = [0] * (1 << n)
    inter = [full] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        union[mask] = union[mask & (mask - 1)] | ballots[low]
        inter[mask] = inter[mask & (mask - 1)] & ballots[low]
    return union, inter


def _mask_members(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _scaled_coverage(q: FractionalCommittee, scale: int):
    weights = [int(x * scale) for x in q]
    cache: dict[int, int] = {}

    def cov(cmask: int) -> int:
        value = cache.get(cmask)
        if value is None:
            value = sum(w for c, w in enumerate(weights) if cmask >> c & 1)
            cache[cmask] = value
        return value

    return cov


def check_grp_oracle(instance: Instance, p: CommitteeLike) -> AxiomVerdict:
    """Evaluate the GRP inequality for every one of the ``2^n`` voter groups."""
    n, k = instance.n, instance.k
    if n > ORACLE_MAX_VOTERS:
        raise TooLarge(f"GRP enumeration limited to n <= {ORACLE_MAX_VOTERS}")
    q = as_committee(p, instance)
    scale = math.lcm(*(x.denominator for x in q))
    cov = _scaled_coverage(q, scale)
    union, _ = _bitmask_tables(instance)
    size = 1 << n
    # everything below is multiplied by n: g(T) = |T|k - n|U_T|
    best = [0] * size
    arg = list(range(size))
    for mask in range(size):
        g = mask.bit_count() * k - n * union[mask].bit_count()
        if g > 0:
            best[mask] = g
        else:
            arg[mask] = 0
    for i in range(n):
        bit = 1 << i
        for mask in range(size):
            if mask & bit and best[mask ^ bit] > best[mask]:
                best[mask] = best[mask ^ bit]
                arg[mask] = arg[mask ^ bit]
    for mask in sorted(range(1, size), key=lambda s: (s.bit_count(), s)):
        owed = mask.bit_count() * k - best[mask]
        if n * cov(union[mask]) < owed * scale:
            S = _mask_members(mask)
            return AxiomVerdict(
                False,
                witness=S,
                coverage=Fraction(cov(union[mask]), scale),
                required=Fraction(owed, n),
                penalty_set=_mask_members(arg[mask]),
            )
    return AxiomVerdict(True)


# --- fair-share axioms ---------------------------------------------------------


def gfs_share(instance: Instance, i: int) -> Fraction:
    return Fraction(min(instance.k, len(instance.approvals[i])), instance.n)


def check_gfs(instance: Instance, p: CommitteeLike) -> AxiomVerdict:
    """Group fair share via one max flow.

    Voter ``i`` is entitled to ``min(k, |A_i|)/n`` and candidate ``c`` can
    absorb ``p_c``.  Every group is covered iff all entitlements can flow.
    """
    q = as_committee(p, instance)
    ent = tuple(gfs_share(instance, i) for i in range(instance.n))
    net = EntitlementNetwork(instance, ent, sink_caps=q.p)
    f = max_flow(net)
    if f.value == sum(ent, ZERO):
        return AxiomVerdict(True)
    S = min_cut_source_side(net, f)
    return AxiomVerdict(
        False,
        witness=S,
        coverage=coverage(instance, q, S),
        required=sum((ent[i] for i in S), ZERO),
    )


def check_gfs_oracle(instance: Instance, p: CommitteeLike) -> AxiomVerdict:
    """Group fair share by enumerating every voter group."""
    n, k = instance.n, instance.k
    if n > ORACLE_MAX_VOTERS:
        raise TooLarge(f"GFS enumeration limited to n <= {ORACLE_MAX_VOTERS}")
    q = as_committee(p, instance)
    scale = math.lcm(*(x.denominator for x in q))
    cov = _scaled_coverage(q, scale)
    union, _ = _bitmask_tables(instance)
    owed_by = [min(k, len(A)) for A in instance.approvals]
    owed = [0] * (1 << n)
    for mask in sorted(range(1, 1 << n), key=lambda s: (s.bit_count(), s)):
        low = (mask & -mask).bit_length() - 1
        owed[mask] = owed[mask & (mask - 1)] + owed_by[low]
        if n * cov(union[mask]) < owed[mask] * scale:
            return AxiomVerdict(
                False,
                witness=_mask_members(mask),
                coverage=Fraction(cov(union[mask]), scale),
                required=Fraction(owed[mask], n),
            )
    return AxiomVerdict(True)


def check_strong_ufs(instance: Instance, p: CommitteeLike) -> AxiomVerdict:
    """Strong unanimous fair share, checked on maximal identical-ballot groups."""
    q = as_committee(p, instance)
    groups: dict[frozenset[int], list[int]] = {}
    for i, A in enumerate(instance.approvals):
        groups.setdefault(A, []).append(i)
    for A, members in sorted(groups.items(), key=lambda kv: kv[1][0]):
        need = min(len(members) * instance.share, Fraction(len(A)))
        got = sum((q[c] for c in A), ZERO)
        if got < need:
            return AxiomVerdict(False, witness=frozenset(members), coverage=got, required=need)
    return AxiomVerdict(True)


def check_pjr(instance: Instance, W: Iterable[int]) -> AxiomVerdict:
    """Proportional justified representation of an integral committee ``W``.

    A group ``N'`` is l-cohesive when ``|N'| >= l n / k`` and its members
    share at least ``l`` candidates; it must then have ``l`` approved
    members in ``W``.  Only the largest feasible ``l`` per group binds.
    """
    n, k = instance.n, instance.k
    if n > ORACLE_MAX_VOTERS:
        raise TooLarge(f"PJR enumeration limited to n <= {ORACLE_MAX_VOTERS}")
    chosen = frozenset(W)
    if len(chosen) != k or not all(0 <= c < instance.m for c in chosen):
        raise InvalidCommittee(f"PJR needs an integral committee of size k={k}")
    wmask = sum(1 << c for c in chosen)
    union, inter = _bitmask_tables(instance)
    for mask in sorted(range(1, 1 << n), key=lambda s: (s.bit_count(), s)):
        level = min(inter[mask].bit_count(), mask.bit_count() * k // n)
        if level >= 1:
            hit = (union[mask] & wmask).bit_count()
            if hit < level:
                return AxiomVerdict(
                    False,
                    witness=_mask_members(mask),
                    coverage=Fraction(hit),
                    required=Fraction(level),
                    cohesion=level,
                )
    return AxiomVerdict(True)


__all__ = [
    "AxiomVerdict",
    "check_gfs",
    "check_gfs_oracle",
    "check_grp",
    "check_grp_oracle",
    "check_pjr",
    "check_strong_ufs",
    "coverage",
    "gfs_share",
    "grp_rhs",
    "utilitarian_welfare",
]
