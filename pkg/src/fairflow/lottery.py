"""Lotteries over integral committees implementing a fractional committee."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from fairflow.core import ONE, ZERO, FractionalCommittee, Lottery, RationalLike, as_committee
from fairflow.errors import InvalidCommittee


@dataclass(frozen=True)
class DecompositionStep:
    weight: Fraction
    committee: frozenset[int]
    residual: tuple[Fraction, ...]


def _top_k(r: list[Fraction], k: int) -> list[int]:
    return sorted(range(len(r)), key=lambda c: (-r[c], c))[:k]


def decomposition_steps(p: FractionalCommittee | list[RationalLike], k: int) -> list[DecompositionStep]:
    """Peel off top-``k`` committees until the residual is integral.

    Each step takes the ``k`` largest residual coordinates W and the
    largest relative weight ``lam`` keeping the rescaled residual
    ``(r - lam 1_W) / (1 - lam)`` inside [0, 1].  That pins at least one
    coordinate to 0 or 1, so at most ``m`` steps are needed.
    """
    q = as_committee(p)
    if q.k != k or sum(q.p, ZERO) != k:
        raise InvalidCommittee(f"committee sums to {sum(q.p, ZERO)}, expected k={k}")
    r = list(q.p)
    m = len(r)
    remaining = ONE
    steps: list[DecompositionStep] = []
    while True:
        W = _top_k(r, k)
        chosen = frozenset(W)
        if all(x in (ZERO, ONE) for x in r):
            steps.append(DecompositionStep(remaining, chosen, tuple(r)))
            return steps
        rest = [c for c in range(m) if c not in chosen]
        assert r[W[-1]] > 0 and (not rest or max(r[c] for c in rest) < 1), "top-k selection lost validity"
        lam = min(r[c] for c in W)
        if rest:
            lam = min(lam, ONE - max(r[c] for c in rest))
        r = [(x - lam * (c in chosen)) / (1 - lam) for c, x in enumerate(r)]
        steps.append(DecompositionStep(lam * remaining, chosen, tuple(r)))
        remaining *= 1 - lam
        assert len(steps) <= m, "decomposition exceeded m steps"


def decompose(p: FractionalCommittee | list[RationalLike], k: int) -> Lottery:
    """Lottery over size-``k`` committees whose marginals are exactly ``p``."""
    merged: dict[frozenset[int], Fraction] = {}
    for step in decomposition_steps(p, k):
        merged[step.committee] = merged.get(step.committee, ZERO) + step.weight
    return Lottery(tuple((w, W) for W, w in merged.items()))


def sample(lottery: Lottery, seed: int) -> frozenset[int]:
    """Draw one committee with its lottery weight, exactly and reproducibly."""
    scale = math.lcm(*(w.denominator for w, _ in lottery.entries))
    ticket = random.Random(seed).randrange(scale)
    for weight, committee in lottery.entries:
        share = int(weight * scale)
        if ticket < share:
            return committee
        ticket -= share
    raise AssertionError("lottery weights do not sum to one")
