from fractions import Fraction

import pytest
from hypothesis import given, settings

from fairflow.axioms import check_grp
from fairflow.bbw import (
    PaymentFunction,
    bbw_lottery,
    complete_to_max_flow,
    flow_from_payments,
    mes,
    verify_affordability,
)
from fairflow.core import Instance, lottery_marginals
from fairflow.errors import DimensionMismatch, UnaffordablePayments
from fairflow.flownet import Flow, check_feasible, committee_of_flow, max_flow, network_representation
from support import I1, frac_tuple, instances

third = Fraction(1, 3)


def _mes_payments_I1():
    return PaymentFunction.from_rows([[third, 0, 0]] * 3 + [[0, 0, 0]])


def test_verify_affordability_examples():
    assert verify_affordability(I1, {0}, _mes_payments_I1())
    assert verify_affordability(I1, set(), PaymentFunction.zeros(4, 3))
    half = PaymentFunction.from_rows([[0, 0, 0]] * 3 + [[0, 0, Fraction(1, 2)]])
    assert not verify_affordability(I1, {2}, half)
    with pytest.raises(DimensionMismatch):
        verify_affordability(I1, set(), PaymentFunction.zeros(3, 3))


def test_affordability_conditions_individually():
    off_ballot = PaymentFunction.from_rows([[third, 0, 0]] * 2 + [[0, 0, third], [third, 0, 0]])
    assert not verify_affordability(I1, {0}, off_ballot)
    over_budget = PaymentFunction.from_rows([[1, 0, 0]] + [[0, 0, 0]] * 3)
    assert not verify_affordability(I1, {0}, over_budget)
    assert not verify_affordability(I1, set(), _mes_payments_I1())


def test_mes_examples():
    W, pi = mes(I1)
    assert W == {0}
    assert pi == _mes_payments_I1()
    solo = Instance.from_ballots(3, 3, [{0}, {1}, {2}])
    W, pi = mes(solo)
    assert W == {0, 1, 2} and all(pi[i, i] == 1 for i in range(3))
    blank = Instance.from_ballots(3, 2, [set(), set()])
    W, pi = mes(blank)
    assert W == set() and pi == PaymentFunction.zeros(2, 3)


def test_flow_from_payments():
    net = network_representation(I1)
    f = flow_from_payments(I1, _mes_payments_I1())
    check_feasible(net, f)
    assert f.value == 1 and f.sink_flow(0) == 1
    assert flow_from_payments(I1, PaymentFunction.zeros(4, 3)).value == 0
    with pytest.raises(UnaffordablePayments):
        flow_from_payments(I1, PaymentFunction.from_rows([[1, 0, 0]] + [[0, 0, 0]] * 3))


def test_complete_to_max_flow_examples():
    net = network_representation(I1)
    f = complete_to_max_flow(net, flow_from_payments(I1, _mes_payments_I1()))
    assert f.value == 2
    assert committee_of_flow(net, f) == frac_tuple(1, "1/2", "1/2")
    again = complete_to_max_flow(net, f)
    assert committee_of_flow(net, again) == committee_of_flow(net, f)
    assert complete_to_max_flow(net, Flow.zero(net)).value == 2


def test_bbw_lottery_on_I1():
    W, pi = mes(I1)
    lot = bbw_lottery(I1, W, pi)
    assert set(lot.entries) == {(Fraction(1, 2), frozenset({0, 1})), (Fraction(1, 2), frozenset({0, 2}))}
    assert lottery_marginals(lot, 3).p == frac_tuple(1, "1/2", "1/2")


def test_bbw_degenerate_cases():
    solo = Instance.from_ballots(2, 2, [{0}, {1}])
    W, pi = mes(solo)
    assert bbw_lottery(solo, W, pi).entries == ((Fraction(1), frozenset({0, 1})),)
    blank = Instance.from_ballots(3, 1, [set()])
    lot = bbw_lottery(blank, set(), PaymentFunction.zeros(1, 3))
    assert check_grp(blank, lottery_marginals(lot, 3))
    with pytest.raises(UnaffordablePayments):
        bbw_lottery(I1, {1}, _mes_payments_I1())


@settings(max_examples=150, deadline=None)
@given(instances(n_max=10, m_max=7))
def test_bbw_pipeline(inst):
    W, pi = mes(inst)
    assert len(W) <= inst.k
    assert verify_affordability(inst, W, pi)
    assert all(pi.spent(i) <= inst.share for i in range(inst.n))
    net = network_representation(inst)
    start = flow_from_payments(inst, pi)
    done = complete_to_max_flow(net, start)
    assert done.value == max_flow(net).value
    assert all(done.sink_flow(c) >= start.sink_flow(c) for c in range(inst.m))
    lot = bbw_lottery(inst, W, pi)
    p = lottery_marginals(lot, inst.m)
    assert check_grp(inst, p)
    assert all(W <= S for _, S in lot.entries)
    assert all(p[c] >= start.sink_flow(c) for c in range(inst.m))
