from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from highway_pricing import (
    Customer, Instance, Marking, ValidationError, boundary_graph, cyc_single_val,
    cycle_identity_check, cycle_sl, line_single_val_subroutine, pairwise_space, split_at_pivot,
)
from highway_pricing.core import bundle_sums, payments, profit
from highway_pricing.cycle import PIVOT_PRICES, cycle_sl_from_marking, potential_prices

from strategies import cycle_instances


def cycle(n, *customers):
    return Instance("cycle", n, tuple(Customer(*c) for c in customers))


def test_potential_example():
    inst = cycle(3, (1, 1, 1), (2, 3, 2))
    marking = Marking.from_sides(3, {0})
    g = boundary_graph(inst)
    assert potential_prices(inst, g, marking, 1) == (1, 0, -1)
    report = cycle_sl_from_marking(inst, marking)
    assert [a.customer for a in report.kept] == [0]
    assert report.chosen_x == 1 and report.profit == 1


def test_all_left_marking_prices_zero():
    inst = cycle(4, (1, 2, 1), (3, 4, 2))
    report = cycle_sl_from_marking(inst, Marking((True,) * 4))
    assert report.prices == (0,) * 4 and report.profit == 0


@given(cycle_instances(min_m=1), st.data())
def test_kept_arcs_pay_x(inst, data):
    marking = data.draw(st.sampled_from(pairwise_space(inst.n)))
    g = boundary_graph(inst)
    for x in range(min(inst.valuations), max(inst.valuations) + 1):
        sums = bundle_sums(inst, potential_prices(inst, g, marking, x))
        for arc in g.arcs:
            if marking.left[arc.tail] and not marking.left[arc.head]:
                assert sums[arc.customer] == x


def test_cycle_identity_example():
    # kept valuations {2, 3} on disjoint arcs: bound(p_2) = 4, bound(p_3) = 3
    inst = cycle(4, (1, 1, 2), (3, 3, 3))
    marking = Marking.from_sides(4, {0, 2})
    check = cycle_identity_check(inst, marking)
    assert check.lower == {2: 4, 3: 3}
    assert (check.value, check.reconstructed, check.difference) == (5, 5, 0)


def test_cycle_identity_empty():
    check = cycle_identity_check(cycle(3, (1, 2, 1)), Marking((True,) * 3))
    assert check.value == check.reconstructed == 0


@given(cycle_instances(min_m=1, max_w=4))
def test_cycle_identity_and_realized(inst):
    for marking in pairwise_space(inst.n):
        check = cycle_identity_check(inst, marking)
        assert check.difference == 0
        for x, lower in check.lower.items():
            assert check.realized[x] >= lower


def test_cycle_sl_strategies():
    inst = cycle(5, (1, 3, 1), (4, 1, 2), (2, 2, 1))
    assert cycle_sl(inst, "random", 4) == cycle_sl(inst, "random", 4)
    with pytest.raises(ValueError):
        cycle_sl(inst, "local")


# -- single valuation --------------------------------------------------------

def test_split_example():
    inst = cycle(3, (1, 1, 1), (2, 2, 1), (3, 1, 1))
    split = split_at_pivot(inst, 1)
    assert split.e_in == (0, 2) and split.e_out == (1,)
    assert split.v_out == {2} and split.relabel == {2: 1}
    assert split.line_instance.customers == (Customer(1, 1, 1),)


def test_split_relabels_in_cut_open_order():
    inst = cycle(5, (4, 1, 1), (5, 5, 1), (2, 3, 1))
    split = split_at_pivot(inst, 2)
    assert split.e_in == (2,)
    assert split.relabel == {4: 1, 5: 2, 1: 3}
    assert split.line_instance.customers == (Customer(1, 3, 1), Customer(2, 2, 1))


def test_pivot_outside_every_bundle():
    inst = cycle(4, (2, 3, 1))
    split = split_at_pivot(inst, 1)
    assert split.e_in == ()
    assert cyc_single_val(inst, h=1).sigma_profit == 0


def test_split_needs_single_valuation():
    with pytest.raises(ValidationError):
        split_at_pivot(cycle(3, (1, 1, 1), (2, 2, 2)), 1)


def test_subroutine_examples():
    one = Instance("line", 1, (Customer(1, 1, 1),))
    res = line_single_val_subroutine(one)
    assert res.prices == (1,) and res.value == 1 and res.a == 2
    nested = Instance("line", 2, (Customer(1, 2, 1), Customer(2, 2, 1)))
    res = line_single_val_subroutine(nested)
    assert res.value == 2 and profit(nested, res.prices) == 2
    assert res.partial_sums[0] == 0


@given(st.integers(1, 6), st.data())
def test_subroutine_profit_equals_cut_value(n, data):
    customers = []
    for _ in range(data.draw(st.integers(1, 6))):
        a = data.draw(st.integers(1, n))
        customers.append(Customer(a, data.draw(st.integers(a, n)), 1))
    inst = Instance("line", n, tuple(customers))
    for strategy in ("exact", "local", "derandomized"):
        res = line_single_val_subroutine(inst, strategy, seed=0)
        assert res.partial_sums[0] == 0
        # unit valuations: every kept arc pays exactly 1
        assert profit(inst, res.prices) >= res.value
        assert 4 * res.value >= inst.m


def test_single_val_example():
    inst = cycle(3, (1, 1, 1), (2, 2, 1), (3, 1, 1))
    report = cyc_single_val(inst, h=1)
    assert report.sigma_profit == 2 and report.tau_profit == 3 and report.profit == 3
    assert report.classes.m_h == 1 and report.classes.m_l[0] == 1
    assert report.pivot_price == 1 and report.profit_in == 2
    assert report.certified_ratio == Fraction(5, 2)


def test_single_val_scales_valuation():
    unit = cycle(3, (1, 1, 1), (2, 2, 1), (3, 1, 1))
    triple = cycle(3, (1, 1, 3), (2, 2, 3), (3, 1, 3))
    a, b = cyc_single_val(unit, h=1), cyc_single_val(triple, h=1)
    assert b.profit == 3 * a.profit
    assert b.prices == tuple(3 * p for p in a.prices)
    assert profit(triple, b.prices) == b.profit


def test_single_val_rejects_unknown_dicut():
    with pytest.raises(ValueError):
        cyc_single_val(cycle(3, (1, 1, 1)), dicut="random")


@given(cycle_instances(min_m=1, single_valuation=True, max_w=2), st.sampled_from(["exact", "local"]))
def test_in_class_table_and_pigeonhole(inst, dicut):
    w = inst.customers[0].valuation
    for h in range(1, inst.n + 1):
        report = cyc_single_val(inst, h=h, dicut=dicut, seed=0)
        split = split_at_pivot(inst, h)
        assert report.classes.total() == len(split.e_in)
        assert 4 * report.profit_in >= len(split.e_in) * w
        assert max(report.classes.profit_for(x) for x in PIVOT_PRICES) * w == report.profit_in
        assert profit(inst, report.prices) == report.profit


def test_in_class_table_matches_direct_evaluation():
    inst = cycle(6, (5, 2, 1), (6, 1, 1), (1, 3, 1), (1, 1, 1), (3, 4, 1), (2, 5, 1))
    h = 1
    report = cyc_single_val(inst, h=h)
    assert report.source == "tau"
    split = split_at_pivot(inst, h)
    for x in PIVOT_PRICES:
        prices = list(report.prices)
        prices[h - 1] = Fraction(x)
        paid = payments(inst, prices)
        assert sum(paid[j] for j in split.e_in) == report.classes.profit_for(x)
