from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairflow.core import (
    FractionalCommittee,
    ImpartialCulture,
    Instance,
    Lottery,
    PartyList,
    Resampling,
    format_rational,
    generate_instance,
    lottery_marginals,
    parse_rational,
    utility,
    utility_profile,
)
from fairflow.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidCommittee,
    InvalidInstance,
    InvalidLottery,
    InvalidParameters,
)
from fairflow.lottery import decompose
from support import committees, frac_tuple, instances


def test_utility_examples(I1):
    assert utility(I1, frac_tuple(1, "1/3", "2/3"), 1) == Fraction(4, 3)
    assert utility(I1, frac_tuple(1, 1, 0), 3) == 0
    assert utility(I1, frac_tuple(1, "1/2", "1/2"), 3) == Fraction(1, 2)


def test_utility_errors(I1):
    with pytest.raises(IndexOutOfRange):
        utility(I1, frac_tuple(1, 1, 0), 4)
    with pytest.raises(DimensionMismatch):
        utility(I1, frac_tuple(1, 1), 0)


def test_lottery_marginals_examples():
    third = Fraction(1, 3)
    lot = Lottery(((third, frozenset({0, 1})), (1 - third, frozenset({0, 2}))))
    assert lottery_marginals(lot, 3).p == frac_tuple(1, "1/3", "2/3")
    assert lottery_marginals(Lottery(((Fraction(1), frozenset({0, 1})),)), 3).p == frac_tuple(1, 1, 0)
    half = Fraction(1, 2)
    lot = Lottery(((half, frozenset({0, 1})), (half, frozenset({0, 2}))))
    assert lottery_marginals(lot, 3).p == frac_tuple(1, "1/2", "1/2")


def test_lottery_validation():
    with pytest.raises(InvalidLottery):
        Lottery(((Fraction(1, 2), frozenset({0, 1})),))
    with pytest.raises(InvalidLottery):
        Lottery(((Fraction(1, 2), frozenset({0, 1})), (Fraction(1, 2), frozenset({0}))))
    with pytest.raises(InvalidLottery):
        Lottery(((Fraction(0), frozenset({0})), (Fraction(1), frozenset({1}))))
    with pytest.raises(InvalidLottery):
        lottery_marginals(Lottery(((Fraction(1), frozenset({5})),)), 3)


def test_instance_validation():
    with pytest.raises(InvalidInstance):
        Instance.from_ballots(3, 0, [{0}])
    with pytest.raises(InvalidInstance):
        Instance.from_ballots(3, 4, [{0}])
    with pytest.raises(InvalidInstance):
        Instance.from_ballots(3, 1, [])
    with pytest.raises(InvalidInstance):
        Instance.from_ballots(3, 1, [{3}])
    inst = Instance.from_ballots(3, 1, [set(), {1}])
    assert inst.approval_scores == (0, 1, 0)
    assert inst.share == Fraction(1, 2)


def test_committee_validation():
    with pytest.raises(InvalidCommittee):
        FractionalCommittee(frac_tuple("3/2", "1/2"))
    with pytest.raises(InvalidCommittee):
        FractionalCommittee(frac_tuple("1/2", "1/3"))
    with pytest.raises(TypeError):
        FractionalCommittee((0.5, 0.5))
    assert FractionalCommittee.indicator(4, {1, 3}).k == 2


def test_generators():
    ic = generate_instance(ImpartialCulture(4, 3, 2, Fraction(1, 2)), 7)
    assert ic.n == 4 and ic.m == 3 and ic.k == 2
    assert generate_instance(ImpartialCulture(4, 3, 2, Fraction(1, 2)), 7) == ic
    pl = generate_instance(PartyList(3, 2, ((2, frozenset({0, 1})), (2, frozenset({2})))), 123)
    assert pl.approvals == (frozenset({0, 1}),) * 2 + (frozenset({2}),) * 2
    rs = Resampling(6, 5, 2, frozenset({0, 1}), Fraction(0))
    assert generate_instance(rs, 3).approvals == (frozenset({0, 1}),) * 6


def test_generator_errors():
    with pytest.raises(InvalidParameters):
        generate_instance(ImpartialCulture(4, 3, 2, Fraction(3, 2)), 0)
    with pytest.raises(InvalidParameters):
        generate_instance(ImpartialCulture(4, 3, 5, Fraction(1, 2)), 0)
    with pytest.raises(InvalidParameters):
        generate_instance(Resampling(4, 3, 2, frozenset({0}), Fraction(-1, 2)), 0)


@given(st.fractions())
def test_rational_round_trip(r):
    assert parse_rational(format_rational(r)) == r


def test_parse_rational_rejects_floats():
    with pytest.raises(TypeError):
        parse_rational(0.5)
    with pytest.raises(ValueError):
        parse_rational("one half")


@given(instances(), st.data())
def test_expected_utility_consistency(inst, data):
    p = data.draw(committees_for(inst))
    lot = decompose(p, inst.k)
    expected = tuple(
        sum((w * len(A & W) for w, W in lot.entries), Fraction(0)) for A in inst.approvals
    )
    assert utility_profile(inst, lottery_marginals(lot, inst.m)) == expected


def committees_for(inst):
    from support import random_committee
    import random

    return st.integers(0, 2**32 - 1).map(lambda s: random_committee(random.Random(s), inst.m, inst.k))


@given(committees())
def test_committee_entries_round_trip(p):
    assert FractionalCommittee(tuple(format_rational(x) for x in p)) == p
