import math

import numpy as np
import pytest

from missingdigits import (BoundKind, SymbolicBaseError, best_lower_bound,
                           crude_bound, explicit_spec, f_theta,
                           grid_lower_bound, hausdorff_dim, interval_spec,
                           l2_dimension, lebesgue_spec, partial_sum_S_k,
                           rectangle_bound, square, sup_f)
from missingdigits.measure import BasePower

C3 = explicit_spec(3, [0, 2])
C5 = explicit_spec(5, [0, 1, 2, 3])
RNG = np.random.default_rng(4)


# -------------------------------------------------------------- f and sup f


def test_f_theta_cantor_known_values():
    vals = f_theta(C3, np.array([[0.0], [0.5]]))
    assert vals[0] == pytest.approx(2.0, abs=1e-12)
    assert vals[1] == pytest.approx(2.0, abs=1e-12)


def test_f_theta_periodic():
    thetas = RNG.uniform(0, 1, size=(20, 1))
    a = f_theta(C3, thetas)
    b = f_theta(C3, thetas + 1.0)
    assert np.max(np.abs(a - b)) < 1e-10


def test_sup_f_certificate_brackets_estimate():
    sup = sup_f(C3, h=1e-3)
    assert sup.sup_estimate <= sup.certified_upper
    dense = f_theta(C3, RNG.uniform(0, 1, size=(4000, 1)))
    assert dense.max() <= sup.certified_upper + 1e-12


# ------------------------------------------------------------------ bounds


def test_grid_bound_cantor_value():
    bound = grid_lower_bound(C3)
    assert bound.rigorous
    assert bound.kind is BoundKind.GRID_SUP
    assert bound.value == pytest.approx(0.36907, abs=1e-3)


def test_bounds_never_exceed_hausdorff_dimension():
    for spec in (C3, C5, square(C3), lebesgue_spec(10), interval_spec(10, 1, 8)):
        assert best_lower_bound(spec).value <= hausdorff_dim(spec) + 1e-9


def test_single_digit_spec_clamps_to_zero():
    spec = explicit_spec(3, [0])
    bound = grid_lower_bound(spec)
    assert bound.value == 0.0
    assert hausdorff_dim(spec) == 0.0


def test_crude_bound_reference_values():
    # #D = p - 1 (one missing digit)
    small = crude_bound(interval_spec(10, 0, 8))
    assert small.value == pytest.approx(0.205654, abs=1e-3)
    big = crude_bound(interval_spec(10 ** 6, 0, 10 ** 6 - 2))
    assert big.value == pytest.approx(0.757194, abs=1e-3)
    assert big.value > small.value


def test_crude_bound_needs_base_at_least_four():
    with pytest.raises(ValueError):
        crude_bound(C3)


def test_rectangle_bound_needs_interval_digits():
    with pytest.raises(ValueError):
        rectangle_bound(C3)


def test_rectangle_bound_symbolic_flagship_factor():
    factor = interval_spec(BasePower(10, 10000), 1, BasePower(10, 8000))
    bound = rectangle_bound(factor)
    assert bound.rigorous
    assert bound.value == pytest.approx(0.7995337, abs=1e-4)


def test_rectangle_bound_monotone_in_digit_interval():
    small = rectangle_bound(interval_spec(10, 1, 5)).value
    large = rectangle_bound(interval_spec(10, 1, 8)).value
    assert large >= small


def test_best_lower_bound_is_the_max_of_methods():
    spec = interval_spec(10, 0, 8)
    candidates = [grid_lower_bound(spec).value, crude_bound(spec).value,
                  rectangle_bound(spec).value]
    assert best_lower_bound(spec).value == pytest.approx(max(candidates), abs=1e-12)


def test_grid_bound_rejects_symbolic_base():
    factor = interval_spec(BasePower(10, 10000), 1, BasePower(10, 8000))
    with pytest.raises(SymbolicBaseError):
        grid_lower_bound(factor)
    # best_lower_bound silently falls back to the log-space methods
    assert best_lower_bound(factor).value == pytest.approx(0.7995337, abs=1e-4)


def test_product_bound_adds_factors():
    single = best_lower_bound(C3).value
    pair = best_lower_bound(square(C3))
    assert pair.value == pytest.approx(2 * single, abs=1e-12)
    assert pair.rigorous


def test_l2_dimension_between_l1_bound_and_hausdorff():
    for spec in (C3, C5):
        l2 = l2_dimension(spec)
        assert best_lower_bound(spec).value <= l2.value + 1e-9
        assert l2.value <= hausdorff_dim(spec) + 1e-9


# -------------------------------------------------------------- S_k sums


def test_partial_sums_bounded_by_sup_f_powers():
    # symmetric window spans two residue periods: S_k <= 2 (sup f)^k
    for spec in (C3, C5):
        sup = sup_f(spec, h=1e-3).certified_upper
        for k in (1, 2, 3):
            for theta in RNG.uniform(0, 1, size=4):
                s_k = partial_sum_S_k(spec, [theta], k)
                assert s_k <= 2.0 * sup ** k + 1e-9


def test_partial_sum_monotone_in_k():
    theta = [0.37]
    values = [partial_sum_S_k(C3, theta, k) for k in range(1, 5)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_partial_sum_needs_common_base():
    from missingdigits import product
    with pytest.raises(ValueError):
        partial_sum_S_k(product(C3, C5), [0.1, 0.2], 2)
