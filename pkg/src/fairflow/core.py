"""Domain types for approval-based probabilistic committee voting.

Everything here is exact: marginals, weights and utilities are
:class:`fractions.Fraction` values and no floating point enters any
computation.  Candidates and voters are dense 0-based indices.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Union

from fairflow.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidCommittee,
    InvalidInstance,
    InvalidLottery,
    InvalidParameters,
)

RationalLike = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or ``"num/den"`` string to a Fraction.

    Floats are rejected: they would silently carry binary rounding error
    into computations that compare values for exact equality.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class Instance:
    """An election: ``m`` candidates, one approval set per voter, size ``k``."""

    m: int
    k: int
    approvals: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "approvals", tuple(frozenset(a) for a in self.approvals))
        if not self.approvals:
            raise InvalidInstance("an instance needs at least one voter")
        if not 1 <= self.k <= self.m:
            raise InvalidInstance(f"committee size must satisfy 1 <= k <= m, got k={self.k}, m={self.m}")
        for i, ballot in enumerate(self.approvals):
            for c in ballot:
                if not (isinstance(c, int) and 0 <= c < self.m):
                    raise InvalidInstance(f"voter {i} approves unknown candidate {c!r}")

    @classmethod
    def from_ballots(cls, m: int, k: int, ballots: Iterable[Iterable[int]]) -> Instance:
        return cls(m=m, k=k, approvals=tuple(frozenset(b) for b in ballots))

    @property
    def n(self) -> int:
        return len(self.approvals)

    @cached_property
    def share(self) -> Fraction:
        """Per-voter entitlement ``k/n``."""
        return Fraction(self.k, self.n)

    @cached_property
    def supporters(self) -> tuple[frozenset[int], ...]:
        """``supporters[c]`` is the set of voters approving candidate ``c``."""
        out: list[set[int]] = [set() for _ in range(self.m)]
        for i, ballot in enumerate(self.approvals):
            for c in ballot:
                out[c].add(i)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def approval_scores(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.supporters)

    def with_ballot(self, voter: int, ballot: Iterable[int]) -> Instance:
        """Copy of the instance with one voter's ballot replaced."""
        if not 0 <= voter < self.n:
            raise IndexOutOfRange(f"voter {voter} out of range for n={self.n}")
        approvals = list(self.approvals)
        approvals[voter] = frozenset(ballot)
        return Instance(self.m, self.k, tuple(approvals))


@dataclass(frozen=True)
class FractionalCommittee:
    """Marginal selection probabilities ``p`` with entries in [0, 1].

    The committee size is the (integral) sum of the entries.
    """

    p: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(parse_rational(x) for x in self.p)
        object.__setattr__(self, "p", values)
        for c, x in enumerate(values):
            if not ZERO <= x <= ONE:
                raise InvalidCommittee(f"entry {c} = {x} lies outside [0, 1]")
        total = sum(values, ZERO)
        if total.denominator != 1:
            raise InvalidCommittee(f"entries sum to {total}, which is not an integer committee size")

    @classmethod
    def indicator(cls, m: int, members: Iterable[int]) -> FractionalCommittee:
        chosen = set(members)
        return cls(tuple(ONE if c in chosen else ZERO for c in range(m)))

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def k(self) -> int:
        return int(sum(self.p, ZERO))

    def __len__(self) -> int:
        return len(self.p)

    def __getitem__(self, c: int) -> Fraction:
        return self.p[c]

    def __iter__(self):
        return iter(self.p)

    def is_integral(self) -> bool:
        return all(x in (ZERO, ONE) for x in self.p)

    def support(self) -> frozenset[int]:
        return frozenset(c for c, x in enumerate(self.p) if x > 0)


def as_committee(p: FractionalCommittee | Sequence[RationalLike], instance: Instance | None = None) -> FractionalCommittee:
    """Coerce ``p`` to a FractionalCommittee, checking it fits ``instance``."""
    committee = p if isinstance(p, FractionalCommittee) else FractionalCommittee(tuple(p))
    if instance is not None:
        if committee.m != instance.m:
            raise DimensionMismatch(f"committee has {committee.m} entries, instance has m={instance.m}")
        if committee.k != instance.k:
            raise InvalidCommittee(f"committee has size {committee.k}, instance asks for k={instance.k}")
    return committee


@dataclass(frozen=True)
class Lottery:
    """A probability distribution over integral committees of equal size."""

    entries: tuple[tuple[Fraction, frozenset[int]], ...]

    def __post_init__(self) -> None:
        entries = tuple((parse_rational(w), frozenset(W)) for w, W in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InvalidLottery("a lottery needs at least one committee")
        if any(w <= 0 for w, _ in entries):
            raise InvalidLottery("lottery weights must be strictly positive")
        total = sum((w for w, _ in entries), ZERO)
        if total != 1:
            raise InvalidLottery(f"lottery weights sum to {total}, not 1")
        sizes = {len(W) for _, W in entries}
        if len(sizes) != 1:
            raise InvalidLottery(f"lottery mixes committee sizes {sorted(sizes)}")

    @property
    def k(self) -> int:
        return len(self.entries[0][1])

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def utility(instance: Instance, p: FractionalCommittee | Sequence[RationalLike], voter: int) -> Fraction:
    """Expected number of approved candidates for ``voter`` under ``p``."""
    if not 0 <= voter < instance.n:
        raise IndexOutOfRange(f"voter {voter} out of range for n={instance.n}")
    values = p.p if isinstance(p, FractionalCommittee) else tuple(parse_rational(x) for x in p)
    if len(values) != instance.m:
        raise DimensionMismatch(f"committee has {len(values)} entries, instance has m={instance.m}")
    return sum((values[c] for c in instance.approvals[voter]), ZERO)


def utility_profile(instance: Instance, p: FractionalCommittee | Sequence[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(utility(instance, p, i) for i in range(instance.n))


def lottery_marginals(lottery: Lottery, m: int) -> FractionalCommittee:
    """The fractional committee implemented by ``lottery``."""
    marginals = [ZERO] * m
    for weight, committee in lottery.entries:
        for c in committee:
            if not 0 <= c < m:
                raise InvalidLottery(f"committee member {c} out of range for m={m}")
            marginals[c] += weight
    return FractionalCommittee(tuple(marginals))


# --- instance generators -------------------------------------------------


@dataclass(frozen=True)
class ImpartialCulture:
    """Each voter approves each candidate independently with ``prob``."""

    n: int
    m: int
    k: int
    prob: Fraction

    def generate(self, rng: random.Random) -> Instance:
        prob = parse_rational(self.prob)
        if not ZERO <= prob <= ONE:
            raise InvalidParameters(f"approval probability {prob} outside [0, 1]")
        ballots = [
            frozenset(c for c in range(self.m) if _bernoulli(rng, prob))
            for _ in range(self.n)
        ]
        return Instance(self.m, self.k, tuple(ballots))


@dataclass(frozen=True)
class PartyList:
    """Deterministic profile: ``groups`` lists ``(voter count, ballot)`` pairs."""

    m: int
    k: int
    groups: tuple[tuple[int, frozenset[int]], ...]

    def generate(self, rng: random.Random) -> Instance:
        ballots: list[frozenset[int]] = []
        for count, ballot in self.groups:
            if count < 0:
                raise InvalidParameters("group sizes must be non-negative")
            ballots.extend([frozenset(ballot)] * count)
        return Instance(self.m, self.k, tuple(ballots))


@dataclass(frozen=True)
class Resampling:
    """Resampling model around a central ballot ``base``.

    For every voter and candidate, with probability ``1 - phi`` the
    candidate's membership in ``base`` is copied, otherwise it is
    resampled as approved with probability ``prob`` (by default the
    density of ``base``).
    """

    n: int
    m: int
    k: int
    base: frozenset[int]
    phi: Fraction
    prob: Fraction | None = None

    def generate(self, rng: random.Random) -> Instance:
        phi = parse_rational(self.phi)
        prob = Fraction(len(self.base), self.m) if self.prob is None else parse_rational(self.prob)
        for name, value in (("phi", phi), ("prob", prob)):
            if not ZERO <= value <= ONE:
                raise InvalidParameters(f"{name}={value} outside [0, 1]")
        ballots = []
        for _ in range(self.n):
            ballot = set()
            for c in range(self.m):
                approved = _bernoulli(rng, prob) if _bernoulli(rng, phi) else c in self.base
                if approved:
                    ballot.add(c)
            ballots.append(frozenset(ballot))
        return Instance(self.m, self.k, tuple(ballots))


GeneratorModel = Union[ImpartialCulture, PartyList, Resampling]


def generate_instance(model: GeneratorModel, seed: int) -> Instance:
    """Draw an instance from ``model``; identical seeds give identical instances."""
    if model.k > model.m or model.k < 1:
        raise InvalidParameters(f"committee size k={model.k} must lie in [1, m={model.m}]")
    return model.generate(random.Random(seed))


def _bernoulli(rng: random.Random, prob: Fraction) -> bool:
    # exact: compare a uniform integer against the rational threshold
    return rng.randrange(prob.denominator) < prob.numerator
