import math

import numpy as np
import pytest

from missingdigits import (BasePower, ConfigError, MissingDigitsSpec,
                           ProductMeasureSpec, SymbolicBaseError,
                           explicit_spec, hausdorff_dim, interval_spec,
                           lebesgue_spec, parse_spec, product, sample, square,
                           total_dim)
from missingdigits.measure import as_product

C3 = explicit_spec(3, [0, 2])
C5 = explicit_spec(5, [0, 1, 2, 3])


# ------------------------------------------------------------ construction


def test_base_must_be_at_least_two():
    with pytest.raises(ConfigError):
        BasePower(1)
    with pytest.raises(ConfigError):
        BasePower(10, 0)


def test_digit_set_validation():
    with pytest.raises(ConfigError):
        explicit_spec(3, [])
    with pytest.raises(ConfigError):
        explicit_spec(3, [0, 0, 2])
    with pytest.raises(ConfigError):
        explicit_spec(3, [0, 3])
    with pytest.raises(ConfigError):
        explicit_spec(3, [-1, 0])


def test_digit_vectors_must_match_ambient_dim():
    spec = explicit_spec(3, [(0, 0), (2, 2)], n=2)
    assert spec.digit_matrix().shape == (2, 2)
    with pytest.raises(ConfigError):
        MissingDigitsSpec(BasePower(3), spec.digits, 1)


def test_interval_endpoints():
    with pytest.raises(ConfigError):
        interval_spec(10, 5, 3)
    with pytest.raises(ConfigError):
        interval_spec(10, 0, 10)  # hi must stay below the base
    spec = interval_spec(10, 1, 8)
    assert spec.digit_count() == 8


def test_symbolic_base_stays_symbolic():
    big = BasePower(10, 10000)
    assert not big.is_exact()
    assert big.log_value() == pytest.approx(10000 * math.log(10))
    with pytest.raises(SymbolicBaseError):
        big.exact_int()
    spec = interval_spec(big, 1, BasePower(10, 8000))
    assert not spec.is_enumerable()
    with pytest.raises(SymbolicBaseError):
        spec.digit_matrix()


def test_base_power_parse():
    assert BasePower.parse("10^5") == BasePower(10, 5)
    assert BasePower.parse("7") == BasePower(7, 1)
    with pytest.raises(ConfigError):
        BasePower.parse("ten")


def test_small_power_base_materializes():
    spec = interval_spec(BasePower(2, 4), 0, 15)
    assert spec.p_int() == 16
    assert spec.digit_count() == 16


# -------------------------------------------------------------- dimension


def test_hausdorff_dim_values():
    assert hausdorff_dim(C3) == pytest.approx(math.log(2) / math.log(3), abs=1e-12)
    assert hausdorff_dim(C5) == pytest.approx(math.log(4) / math.log(5), abs=1e-12)
    assert hausdorff_dim(lebesgue_spec(10)) == pytest.approx(1.0, abs=1e-12)


def test_hausdorff_dim_adds_over_factors():
    sq = square(C3)
    assert hausdorff_dim(sq) == pytest.approx(2 * hausdorff_dim(C3), abs=1e-12)
    assert total_dim(sq) == 2


def test_symbolic_dimension_is_exact_in_logs():
    # digits 1..10^8000 in base 10^10000: dim = 8000/10000 exactly
    spec = interval_spec(BasePower(10, 10000), 1, BasePower(10, 8000))
    assert spec.hausdorff_dim() == pytest.approx(0.8, abs=1e-12)


def test_product_flattening():
    prod = product(C3, C5)
    assert isinstance(prod, ProductMeasureSpec)
    assert total_dim(prod) == 2
    assert as_product(C3).factors == (C3,)


def test_lebesgue_spec_is_full_digit_product():
    leb = lebesgue_spec(3, 2)
    prod = as_product(leb)
    assert len(prod.factors) == 2
    assert prod.factors[0].digit_count() == 3


# ---------------------------------------------------------------- parsing


def test_parse_single_factor():
    spec = parse_spec("base = 3; digits = {0,2}")
    assert spec == C3


def test_parse_two_factor_product():
    text = "factor { base = 3; digits = {0,2}; } factor { base = 5; digits = {0,1,2,3}; }"
    spec = parse_spec(text)
    assert as_product(spec).factors == (C3, C5)


def test_parse_interval_and_powers():
    spec = parse_spec("base = 10^10000; digits = 1..10^8000")
    assert spec.hausdorff_dim() == pytest.approx(0.8, abs=1e-12)


def test_parse_planar_digit_tuples():
    spec = parse_spec("base = 3; digits = {(0,0),(2,2)}; n = 2")
    assert spec.ambient_dim == 2
    assert spec.digit_count() == 2


def test_config_text_round_trip():
    for spec in (C3, C5, interval_spec(10, 1, 8)):
        assert parse_spec(spec.config_text()) == spec


def test_parse_errors():
    for text in ("", "base = 3", "digits = {0}", "base = 3; digits = {}",
                 "base = 3; digits = {0,2}; extra = 1"):
        with pytest.raises(ConfigError):
            parse_spec(text)


# --------------------------------------------------------------- sampling


def test_sample_shape_and_range():
    pts = sample(square(C3), depth=10, count=500, seed=1)
    assert pts.shape == (500, 2)
    assert pts.min() >= 0.0 and pts.max() <= 1.0


def test_sample_deterministic_by_seed():
    a = sample(C3, depth=8, count=64, seed=42)
    b = sample(C3, depth=8, count=64, seed=42)
    c = sample(C3, depth=8, count=64, seed=43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_accepts_tuple_seed():
    a = sample(C3, depth=8, count=16, seed=(7, 0))
    b = sample(C3, depth=8, count=16, seed=(7, 1))
    assert a.shape == b.shape and not np.array_equal(a, b)


def test_sample_digits_stay_in_digit_set():
    depth = 6
    pts = sample(square(C3), depth=depth, count=400, seed=3)
    scaled = np.rint(pts * 3 ** depth).astype(np.int64)
    for column in scaled.T:
        for value in column:
            for _ in range(depth):
                value, digit = divmod(value, 3)
                assert digit in (0, 2)


def test_sample_mean_matches_digit_average():
    # E[point] = mean(D)/(p-1) for each coordinate: 1/2 for Cantor {0,2}
    pts = sample(C3, depth=20, count=200_000, seed=11)
    assert abs(pts.mean() - 0.5) < 0.003
