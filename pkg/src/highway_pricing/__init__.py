"""Approximation algorithms for coupon-model highway pricing on lines,
cycles and trees, with exact oracles for small instances."""

from .bounds import alpha_root, theorem3_bound
from .core import (
    Arc, BoundaryGraph, Customer, GuardError, Instance, PriceConstraintError, ValidationError,
    ValuationProfile, boundary_graph, partial_sums_from_prices, prices_from_partial_sums, profit,
    validate_instance, valuation_profile,
)
from .cuts import (
    CutResult, Marking, best_marking, crossing, exact_max_dicut, local_search_dicut,
    pairwise_space, random_marking,
)
from .cycle import cyc_single_val, cycle_identity_check, cycle_sl, line_single_val_subroutine, split_at_pivot
from .line import line_combined, line_cut, line_cut_identity_check, line_random, line_random_expected_profit
from .oracle import exact_expectation, exact_opt_coupon, monte_carlo
from .tree import tree_random

__version__ = "0.1.0"
