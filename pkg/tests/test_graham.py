import math
import random
from fractions import Fraction

import pytest

from missingdigits import (BudgetExceededError, ConfigError, EvalBudget,
                           Restriction, density_report, digits_ok,
                           enumerate_restricted, enumerate_scaled,
                           parse_system, system)

PAIR = system((3, {0, 1}), (5, {0, 1, 2}))


# --------------------------------------------------------------- digit test


def test_digits_ok_examples():
    assert digits_ok(10, 3, {0, 1})        # 101 in base 3
    assert digits_ok(10, 5, {0, 1, 2})     # 20 in base 5
    assert not digits_ok(2, 3, {0, 1})
    assert digits_ok(0, 3, {0, 1})         # zero's expansion is "0"
    assert not digits_ok(0, 3, {1, 2})


def test_restriction_validation():
    with pytest.raises(ConfigError):
        Restriction(2, frozenset({0, 1}))
    with pytest.raises(ConfigError):
        Restriction(3, frozenset())
    with pytest.raises(ConfigError):
        Restriction(3, frozenset({0, 3}))
    with pytest.raises(ConfigError):
        Restriction(3, frozenset({0, 1}), Fraction(3, 2))


def test_float_scales_rejected():
    with pytest.raises(ConfigError):
        system((3, {0, 1}), scales=[0.5])


# ------------------------------------------------------------- enumeration


def test_reference_pair_up_to_100():
    assert enumerate_restricted(PAIR, 100) == [1, 10, 12, 27, 30, 31, 36, 37]


def test_single_full_restriction_keeps_everything():
    full = system((10, range(10)))
    assert enumerate_restricted(full, 75) == list(range(1, 76))


def test_output_strictly_increasing_and_rechecks():
    members = enumerate_restricted(PAIR, 5000)
    assert all(a < b for a, b in zip(members, members[1:]))
    assert all(digits_ok(m, 3, {0, 1}) and digits_ok(m, 5, {0, 1, 2})
               for m in members)
    assert 0 not in members


def test_dfs_equals_brute_force_on_random_systems():
    rng = random.Random(2026)
    for _ in range(50):
        parts = []
        for _ in range(rng.randint(1, 3)):
            base = rng.randint(3, 12)
            size = rng.randint(1, base - 1)
            digits = frozenset(rng.sample(range(base), size))
            parts.append((base, digits))
        limit = rng.randint(10, 100_000)
        sys_ = system(*parts)
        brute = [n for n in range(1, limit + 1)
                 if all(digits_ok(n, b, d) for b, d in parts)]
        assert enumerate_restricted(sys_, limit) == brute


def test_worker_partition_matches_serial():
    triple = system((3, {0, 1}), (5, {0, 1, 2}), (7, {0, 1, 2, 3}))
    serial = enumerate_restricted(triple, 10 ** 6)
    parallel = enumerate_restricted(triple, 10 ** 6, workers=4)
    assert serial == parallel


def test_count_below_base_power_with_zero_digit():
    single = system((3, {0, 1}))
    for k in (3, 5, 7):
        members = enumerate_restricted(single, 3 ** k - 1)
        assert len(members) == 2 ** k - 1


def test_enumeration_budget():
    wide = system((10, range(10)))
    with pytest.raises(BudgetExceededError):
        enumerate_restricted(wide, 10 ** 7, budget=EvalBudget(1000))


# ------------------------------------------------------------------ scaling


def test_scaled_with_unit_scales_matches_enumerate():
    assert enumerate_scaled(PAIR, 300) == enumerate_restricted(PAIR, 300)


def test_scaled_floor_uses_exact_rationals():
    scaled = system((3, {0, 1}), (5, {0, 1, 2}),
                    scales=[Fraction(1), Fraction(1, 2)])
    got = enumerate_scaled(scaled, 100)
    # independent re-scan with integer arithmetic
    want = [n for n in range(1, 101)
            if digits_ok(n, 3, {0, 1}) and digits_ok(n // 2, 5, {0, 1, 2})]
    assert got == want


def test_tiny_scale_floors_to_zero_digit():
    tiny = system((3, {0, 1}), scales=[Fraction(1, 10 ** 9)])
    assert enumerate_scaled(tiny, 200) == list(range(1, 201))


def test_enumerate_requires_unit_scales():
    scaled = system((3, {0, 1}), scales=[Fraction(1, 2)])
    with pytest.raises(ConfigError):
        enumerate_restricted(scaled, 100)


# ------------------------------------------------------------------ parsing


def test_parse_system_round_trip():
    sys_ = parse_system("3:{0,1};5:{0,1,2}")
    assert sys_ == PAIR
    scaled = parse_system("3:{0,1};5:{0,1,2}", "1,1/2")
    assert scaled.restrictions[1].scale == Fraction(1, 2)


def test_parse_system_errors():
    for text in ("", "3:0,1", "3:{}", "x:{0}", "3:{0,a}"):
        with pytest.raises((ConfigError, ValueError)):
            parse_system(text)


# ------------------------------------------------------------------ density


def test_density_exponent_single_cantor_restriction():
    rows = density_report(system((3, {0, 1})), [3 ** 12])
    target = math.log(2) / math.log(3)
    assert rows[0]["exponent"] == pytest.approx(target, abs=0.05)


def test_density_exponent_full_digit_sets_near_one():
    rows = density_report(system((10, range(10))), [10 ** 5])
    assert rows[0]["exponent"] == pytest.approx(1.0, abs=0.01)


def test_density_counts_cumulative():
    rows = density_report(PAIR, [10, 100, 1000])
    counts = [r["count"] for r in rows]
    assert counts == sorted(counts)
    assert counts[1] == 8  # the reference set up to 100
