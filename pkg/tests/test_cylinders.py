import math

import numpy as np
import pytest

from missingdigits import (AxisBox, TubeSpec, cylinder_mass, explicit_spec,
                           lebesgue_spec, square, tube_mass_mc)

C32 = square(explicit_spec(3, [0, 2]))
LEB2 = lebesgue_spec(3, 2)


# ------------------------------------------------------------------ boxes


def test_axis_box_on_cylinder_boundary_is_exact():
    # [0, 1/3] x [0, 1] catches exactly the digit-0 column of Cantor:
    # half the mass, and the enclosure is tight already at depth 1
    box = AxisBox((0.0, 0.0), (1.0 / 3.0, 1.0))
    for depth in (1, 4):
        lo, hi = cylinder_mass(C32, box, depth=depth)
        assert lo == pytest.approx(0.5, abs=1e-12)
        assert hi == pytest.approx(0.5, abs=1e-12)


def test_axis_box_off_boundary_brackets_lebesgue_area():
    box = AxisBox((0.0, 0.0), (0.5, 1.0))
    lo, hi = cylinder_mass(LEB2, box, depth=3)
    assert lo <= 0.5 <= hi
    assert hi - lo <= 1.0 / 27.0 + 1e-12


def test_axis_box_enclosures_nest_with_depth():
    box = AxisBox((0.1, 0.2), (0.62, 0.9))
    prev_lo, prev_hi = cylinder_mass(C32, box, depth=2)
    for depth in (3, 4, 5, 6):
        lo, hi = cylinder_mass(C32, box, depth=depth)
        assert lo >= prev_lo - 1e-12
        assert hi <= prev_hi + 1e-12
        prev_lo, prev_hi = lo, hi
    assert prev_hi - prev_lo < 0.05


def test_axis_box_whole_square_has_unit_mass():
    lo, hi = cylinder_mass(C32, AxisBox((0.0, 0.0), (1.0, 1.0)), depth=1)
    assert lo == pytest.approx(1.0, abs=1e-12)
    assert hi == pytest.approx(1.0, abs=1e-12)


# ------------------------------------------------------------------ tubes


def test_tube_normalizes_direction_and_defaults_length():
    tube = TubeSpec((-2.0, 0.0), (3.0, 4.0), half_width=0.1)
    assert np.hypot(*tube.theta) == pytest.approx(1.0, abs=1e-12)
    assert tube.half_length == pytest.approx(2.0 + math.sqrt(2.0), abs=1e-12)
    px, py = tube.perp()
    assert px * tube.theta[0] + py * tube.theta[1] == pytest.approx(0.0, abs=1e-12)


def test_tube_validation():
    with pytest.raises(ValueError):
        TubeSpec((0.0, 0.0), (0.0, 0.0), half_width=0.1)
    with pytest.raises(ValueError):
        TubeSpec((0.0, 0.0), (1.0, 0.0), half_width=0.5, half_length=0.1)
    with pytest.raises(ValueError):
        TubeSpec((0.0, 0.0), (1.0, 0.0), half_width=-0.1)


def test_lebesgue_horizontal_tube_matches_area():
    # tube along y = 0.5 of half-width delta cuts a 1 x 2delta strip
    delta = 0.05
    tube = TubeSpec((-1.0, 0.5), (1.0, 0.0), half_width=delta)
    lo, hi = cylinder_mass(LEB2, tube, depth=6)
    assert lo <= 2 * delta <= hi
    assert hi - lo < 0.01


def test_lebesgue_diagonal_tube_matches_area():
    # tube through the center along (1,1): area 2 sqrt(2) delta - 2 delta^2
    delta = 0.05
    tube = TubeSpec((-1.0, -1.0), (1.0, 1.0), half_width=delta)
    exact = 2 * math.sqrt(2) * delta - 2 * delta ** 2
    lo, hi = cylinder_mass(LEB2, tube, depth=6)
    assert lo <= exact <= hi
    assert hi - lo < 0.012


def test_tube_through_middle_third_gap_has_zero_mass():
    # the horizontal ray at height 1/2 runs inside the removed band
    tube = TubeSpec((-1.0, 0.5), (1.0, 0.0), half_width=0.05)
    lo, hi = cylinder_mass(C32, tube, depth=2)
    assert lo == 0.0
    assert hi == 0.0


def test_tube_missing_the_square_entirely():
    tube = TubeSpec((-1.0, -1.0), (0.0, 1.0), half_width=0.1)
    lo, hi = cylinder_mass(C32, tube, depth=3)
    assert lo == 0.0 and hi == 0.0


def test_tube_enclosures_nest_and_bracket_monte_carlo():
    tube = TubeSpec((-1.0, 0.5), (1.5, -0.4), half_width=0.05)
    lo6, hi6 = cylinder_mass(C32, tube, depth=6)
    lo8, hi8 = cylinder_mass(C32, tube, depth=8)
    assert lo6 <= lo8 <= hi8 <= hi6
    p_hat, sigma = tube_mass_mc(C32, tube, samples=200_000, seed=5)
    assert lo8 - 3 * sigma <= p_hat <= hi8 + 3 * sigma


def test_tube_mass_monotone_in_half_width():
    masses = []
    for delta in (0.02, 0.05, 0.1):
        tube = TubeSpec((-1.0, 0.2), (1.0, 0.3), half_width=delta)
        masses.append(cylinder_mass(C32, tube, depth=6)[1])
    assert masses == sorted(masses)
