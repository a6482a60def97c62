from fractions import Fraction
from itertools import product
from statistics import NormalDist

import pytest
from hypothesis import given, settings, strategies as st

from highway_pricing import (
    Customer, GuardError, Instance, Marking, profit, random_marking, tree_random,
)
from highway_pricing.oracle import (
    exact_expectation, exact_opt_coupon, lattice_opt_coupon, monte_carlo, trial_draws,
)
from highway_pricing.line import (
    line_cut, line_random_expected_profit, line_random_from_sums, random_partial_sums,
)
from highway_pricing.tree import rooted_view, tree_prices

from strategies import cycle_instances, family, line_instances

F = Fraction


def line(n, *customers):
    return Instance("line", n, tuple(Customer(*c) for c in customers))


def cycle(n, *customers):
    return Instance("cycle", n, tuple(Customer(*c) for c in customers))


def test_line_example():
    inst = line(2, (1, 1, 1), (2, 2, 1), (1, 2, 1))
    res = exact_opt_coupon(inst)
    assert res.opt == 2 and profit(inst, res.prices) == 2
    assert lattice_opt_coupon(inst) == 2


@pytest.mark.parametrize("n,w", [(1, 1), (3, 2), (5, 7)])
def test_single_full_bundle(n, w):
    assert exact_opt_coupon(line(n, (1, n, w))).opt == w


def test_cycle_needs_fractional_prices():
    inst = cycle(3, (1, 2, 1), (2, 3, 1), (3, 1, 1))
    res = exact_opt_coupon(inst)
    assert res.opt == 3 and res.prices == (F(1, 2),) * 3
    assert lattice_opt_coupon(inst, step=1) == 2
    assert lattice_opt_coupon(inst, step=F(1, 2)) == 3


def test_empty_instance():
    res = exact_opt_coupon(line(3))
    assert res.opt == 0 and res.shares == {}


def test_guard():
    inst = line(1, *[(1, 1, 1)] * 15)
    with pytest.raises(GuardError):
        exact_opt_coupon(inst)
    with pytest.raises(GuardError):
        lattice_opt_coupon(line(8, (1, 8, 9)))


@given(line_instances(max_n=3, max_m=5, max_w=3))
def test_tight_sets_match_integer_lattice_on_lines(inst):
    assert exact_opt_coupon(inst).opt == lattice_opt_coupon(inst)


@given(cycle_instances(max_n=4, max_m=5, max_w=3))
def test_tight_sets_match_half_lattice_on_cycles(inst):
    radius = 2 * max(inst.valuations, default=1)
    assert exact_opt_coupon(inst).opt == lattice_opt_coupon(inst, F(1, 2), radius)


def test_tight_sets_match_lattice_on_trees():
    for inst in family("tree", 40, (2, 4), (1, 5), 3):
        assert exact_opt_coupon(inst).opt == lattice_opt_coupon(inst, radius=2 * max(inst.valuations))


@given(cycle_instances(min_m=1), st.integers(0, 5))
def test_cycle_rotation_and_reflection(inst, shift):
    n = inst.n
    rot = lambda i: (i - 1 + shift) % n + 1
    rotated = inst.with_customers(Customer(rot(c.start), rot(c.end), c.valuation) for c in inst.customers)
    ref = lambda i: n + 1 - i
    reflected = inst.with_customers(Customer(ref(c.end), ref(c.start), c.valuation) for c in inst.customers)
    opt = exact_opt_coupon(inst).opt
    assert exact_opt_coupon(rotated).opt == opt == exact_opt_coupon(reflected).opt


@given(line_instances(min_m=1))
def test_oracle_sanity(inst):
    res = exact_opt_coupon(inst)
    counts = {}
    for w in inst.valuations:
        counts[w] = counts.get(w, 0) + 1
    for x, share in res.shares.items():
        assert share <= counts.get(x, 0) * x
    assert sum(res.shares.values()) == res.opt <= inst.total_valuation
    assert profit(inst, res.prices) == res.opt


# -- expectations ------------------------------------------------------------

def test_expectation_one_customer():
    inst = line(1, (1, 1, 1))
    assert exact_expectation("line_random", inst) == F(1, 4)


@given(line_instances(max_n=3, min_m=1, max_w=2))
@settings(max_examples=25)
def test_expectation_matches_closed_form(inst):
    assert exact_expectation("line_random", inst) == line_random_expected_profit(inst)


def test_expectation_rejects_unknown_algorithm():
    with pytest.raises(ValueError):
        exact_expectation("cyc_single", line(1, (1, 1, 1)))


def test_cut_expectation_is_average_over_pairwise_space():
    inst = line(2, (1, 1, 1), (2, 2, 2), (1, 2, 2))
    value = exact_expectation("line_cut", inst)
    assert 0 < value <= exact_opt_coupon(inst).opt


def test_monte_carlo_one_customer():
    mc = monte_carlo("line_random", line(1, (1, 1, 1)), 10 ** 5, seed=1)
    sigma = (F(1, 4) * F(3, 4)) ** 0.5 / 10 ** 2.5
    assert abs(float(mc.mean) - 0.25) < 3 * sigma
    assert mc.half_width == pytest.approx(NormalDist().inv_cdf(0.995) * mc.stddev / 10 ** 2.5)


def test_monte_carlo_deterministic():
    inst = line(3, (1, 2, 2), (2, 3, 1))
    assert monte_carlo("line_random", inst, 100, seed=4) == monte_carlo("line_random", inst, 100, seed=4)
    with pytest.raises(ValueError):
        monte_carlo("line_random", inst, 99)


def test_first_trial_is_a_single_run():
    assert tuple(trial_draws(12, 100, 5, 4)[0]) == tuple(random_partial_sums(4, 3, 12))
    assert Marking(tuple(trial_draws(12, 100, 5, 2)[0] == 1)) == random_marking(5, 12)
    tree = family("tree", 1, (5, 5), (4, 4), 3)[0]
    ell = max(tree.valuations)
    row = trial_draws(12, 100, tree.n, ell + 1)[0]
    assert tree_prices(rooted_view(tree), row) == tree_random(tree, 12).prices


@pytest.mark.parametrize("algo,topology", [
    ("line_random", "line"), ("line_cut", "line"), ("line_sl", "line"),
    ("cycle_sl", "cycle"), ("tree_random", "tree"),
])
def test_monte_carlo_mean_below_opt(algo, topology):
    for inst in family(topology, 6, (3, 5), (2, 5), 3, seed0=50):
        mc = monte_carlo(algo, inst, 500, seed=3)
        assert mc.mean <= exact_opt_coupon(inst).opt


def test_vectorised_expectations_match_per_draw_evaluation():
    for inst, tree in zip(family("line", 24, (1, 3), (1, 4), 3),
                          family("tree", 24, (1, 4), (1, 4), 3)):
        ell = max(inst.valuations)
        floor = line_cut(inst).profit
        draws = [line_random_from_sums(inst, s).profit for s in product(range(ell + 1), repeat=inst.n + 1)]
        assert exact_expectation("line_random", inst) == sum(draws) / len(draws)
        assert exact_expectation("line_sl", inst) == sum(max(v, floor) for v in draws) / len(draws)
        ell = max(tree.valuations)
        view = rooted_view(tree)
        draws = [profit(tree, tree_prices(view, s)) for s in product(range(ell + 1), repeat=tree.n)]
        assert exact_expectation("tree_random", tree) == sum(draws) / len(draws)
