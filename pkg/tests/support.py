"""Shared instances and random generators for the test-suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from fairflow.core import FractionalCommittee, ImpartialCulture, Instance, PartyList, Resampling, generate_instance

# candidates a, b, c, d are 0, 1, 2, 3; voters are 0-based
I1 = Instance.from_ballots(3, 2, [{0}, {0, 1}, {0, 1}, {2}])
I2 = Instance.from_ballots(4, 2, [{0, 3}, {0, 1}, {0, 1}, {2}])
I3 = Instance.from_ballots(4, 1, [{0, 1}, {1, 2}, {3}])


def i4(n: int = 4) -> Instance:
    """``n`` voters, voter ``i`` approves the common candidate 0 and a private ``i + 1``."""
    return Instance.from_ballots(n + 1, 2, [{0, i + 1} for i in range(n)])


def F(x) -> Fraction:
    return Fraction(x)


def frac_tuple(*xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def random_instance(rng: random.Random, n_max: int = 12, m_max: int = 8, n_min: int = 1) -> Instance:
    n = rng.randint(n_min, n_max)
    m = rng.randint(1, m_max)
    k = rng.randint(1, m)
    seed = rng.randrange(2**32)
    kind = rng.randrange(4)
    if kind == 0:
        model = ImpartialCulture(n, m, k, Fraction(rng.randint(1, 9), 10))
    elif kind == 1:
        base = frozenset(c for c in range(m) if rng.random() < 0.4)
        model = Resampling(n, m, k, base, Fraction(rng.randint(0, 10), 10))
    elif kind == 2:
        parties = rng.randint(1, 4)
        ballots = [frozenset(c for c in range(m) if rng.random() < 0.35) for _ in range(parties)]
        counts = [0] * parties
        for _ in range(n):
            counts[rng.randrange(parties)] += 1
        model = PartyList(m, k, tuple(zip(counts, ballots)))
    else:
        # sparse ballots, frequently empty
        model = ImpartialCulture(n, m, k, Fraction(1, 6))
    return generate_instance(model, seed)


def random_instances(count: int, seed: int, **kw) -> list[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


def random_committee(rng: random.Random, m: int, k: int) -> FractionalCommittee:
    """Marginals of a random lottery over size-``k`` committees."""
    p = [Fraction(0)] * m
    draws = rng.randint(1, 4)
    weights = [rng.randint(1, 6) for _ in range(draws)]
    for w in weights:
        for c in rng.sample(range(m), k):
            p[c] += Fraction(w, sum(weights))
    return FractionalCommittee(tuple(p))


def mix(p: FractionalCommittee, q: FractionalCommittee, t: Fraction) -> FractionalCommittee:
    return FractionalCommittee(tuple(t * a + (1 - t) * b for a, b in zip(p, q)))


@st.composite
def instances(draw, n_max: int = 8, m_max: int = 6, n_min: int = 1):
    m = draw(st.integers(1, m_max))
    n = draw(st.integers(n_min, n_max))
    k = draw(st.integers(1, m))
    ballots = draw(st.lists(st.frozensets(st.integers(0, m - 1)), min_size=n, max_size=n))
    return Instance.from_ballots(m, k, ballots)


@st.composite
def committees(draw, m_max: int = 10):
    m = draw(st.integers(1, m_max))
    k = draw(st.integers(1, m))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_committee(random.Random(seed), m, k)
