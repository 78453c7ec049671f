import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from wignerloss import (
    Banana,
    Cat,
    Fock,
    PhaseGrid,
    Vacuum,
    WignerField,
    apply_loss,
    build_field,
    negativity_curve,
    negativity_volume,
    taylor_estimate,
    vulnerability,
)

FOCK1_EXACT = 2 * math.exp(-0.5) - 1


def test_fock1_oracle_by_radial_quadrature():
    # W_1 = (2 r^2 - 1) e^{-r^2} / pi is negative for r < 1/sqrt(2)
    radial = -quad(lambda r: (2 * r * r - 1) * math.exp(-r * r) / math.pi * 2 * math.pi * r, 0, 1 / math.sqrt(2))[0]
    assert radial == pytest.approx(FOCK1_EXACT, rel=1e-12)
    assert FOCK1_EXACT == pytest.approx(0.21306, abs=1e-5)


def test_vacuum_has_no_negativity():
    result = negativity_volume(build_field(Vacuum()))
    assert result.v_neg == 0.0 and result.negative_cell_count == 0
    assert result.min_value > 0


def test_fock1_negativity():
    result = negativity_volume(build_field(Fock(1)))
    assert result.v_neg == pytest.approx(FOCK1_EXACT, abs=1e-3)
    assert result.min_value == pytest.approx(-1 / math.pi, abs=1e-3)


def test_cat_limit():
    assert negativity_volume(build_field(Cat(4.0))).v_neg == pytest.approx(1 / math.pi, rel=0.02)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=16 * 16, max_size=16 * 16))
def test_two_quadratures_agree(values):
    field = WignerField(PhaseGrid.square(1.0, 16), np.reshape(values, (16, 16)))
    result = negativity_volume(field)  # asserts the two forms internally
    assert result.v_neg >= 0
    if result.negative_cell_count == 0:
        assert result.v_neg == 0.0


@pytest.mark.parametrize("state", [Fock(1), Fock(2), Fock(3), Fock(4), Cat(2.0), Cat(3.6)])
def test_grid_convergence(state):
    coarse = negativity_volume(build_field(state, state.default_grid(512))).v_neg
    fine = negativity_volume(build_field(state, state.default_grid(1024))).v_neg
    assert coarse == pytest.approx(fine, rel=2e-3)


@pytest.mark.parametrize("state", [Fock(1), Cat(3.6), Banana.from_R(5.0, 1.5)])
def test_negativity_gone_at_04(state):
    assert negativity_curve(state, [0.4])[0][1] == pytest.approx(0.0, abs=1e-4)


def test_fock3_curve_is_monotone():
    curve = negativity_curve(Fock(3), [0.6, 0.7, 0.8, 0.9, 1.0])
    values = [v for _, v in curve]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert [e for e, _ in curve] == [0.6, 0.7, 0.8, 0.9, 1.0]


def test_cat_analytic_policy_beats_none():
    none = negativity_curve(Cat(3.6), [0.98])[0][1]
    analytic = negativity_curve(Cat(3.6), [0.98], "analytic_once")[0][1]
    assert analytic >= none


def test_curve_rejects_bad_input():
    with pytest.raises(ValueError):
        negativity_curve(Fock(1), [1.0, 0.9])
    with pytest.raises(ValueError):
        negativity_curve(Fock(1), [0.0, 0.9])
    with pytest.raises(ValueError):
        negativity_curve(Fock(1), [0.9], "sometimes")


def test_curve_on_fixed_grid():
    grid = PhaseGrid.square(6.0, 512)
    (eta, value), = negativity_curve(Fock(1), [1.0], grid=grid)
    assert value == pytest.approx(FOCK1_EXACT, abs=1e-3)


def test_taylor_trivial_cases():
    assert taylor_estimate(0.3, 5.0, 1.0) == 0.3
    assert taylor_estimate(0.3, 0.0, 0.7) == 0.3


def test_taylor_fock1_at_099():
    field = build_field(Fock(1))
    v1 = negativity_volume(field).v_neg
    measured = negativity_volume(apply_loss(Fock(1), None, 0.99)).v_neg
    assert taylor_estimate(v1, vulnerability(field), 0.99) == pytest.approx(measured, rel=0.05)
