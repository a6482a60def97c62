from collections import Counter
from itertools import product

import pytest
from hypothesis import given, strategies as st

from highway_pricing import Customer, Instance, ValidationError, tree_random
from highway_pricing.bench import GeneratorSpec, generate
from highway_pricing.line import line_random_from_sums
from highway_pricing.tree import rooted_view, tree_prices


def path_tree(n, customers=()):
    return Instance("tree", n, tuple(customers), tuple(range(n)))


def test_path_tree_matches_line_with_pinned_start():
    customers = (Customer(1, 3, 2), Customer(2, 2, 1))
    tree = path_tree(3, customers)
    line = Instance("line", 3, customers)
    view = rooted_view(tree)
    for sums in product(range(3), repeat=3):
        assert tree_prices(view, sums) == line_random_from_sums(line, (0, *sums)).prices


def test_single_item_price_uniform_on_zero_one():
    inst = path_tree(1, (Customer(1, 1, 1),))
    counts = Counter(tree_random(inst, seed).prices[0] for seed in range(4000))
    assert set(counts) == {0, 1}
    assert abs(counts[1] - 2000) < 3 * 32


def test_tree_random_deterministic_and_reports_profit():
    inst = generate(GeneratorSpec("tree", 6, 5, 1, 3, seed=2))
    a, b = tree_random(inst, 17), tree_random(inst, 17)
    assert a == b and a.root == inst.root


def test_rerooting():
    inst = path_tree(4)
    view = rooted_view(inst, root=3)
    assert view.parent == {3: 0, 2: 3, 4: 3, 1: 2}
    assert view.order == (3, 2, 4, 1)
    with pytest.raises(ValueError):
        rooted_view(inst, root=5)


def test_rejects_other_topologies():
    with pytest.raises(ValidationError):
        tree_random(Instance("line", 2, ()), 0)


@given(st.integers(0, 10 ** 6), st.data())
def test_descending_path_telescopes(seed, data):
    inst = generate(GeneratorSpec("tree", 6, 0, seed=seed))
    view = rooted_view(inst)
    sums = data.draw(st.lists(st.integers(0, 4), min_size=6, max_size=6))
    prices = tree_prices(view, sums)
    for b in range(1, 7):
        a = b
        while True:
            # the path from a down to b
            path = [b]
            while path[-1] != a:
                path.append(view.parent[path[-1]])
            reference = sums[view.parent[a] - 1] if view.parent[a] else 0
            assert sum(prices[i - 1] for i in path) == sums[b - 1] - reference
            if not view.parent[a]:
                break
            a = view.parent[a]
