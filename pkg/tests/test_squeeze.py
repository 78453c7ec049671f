import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from wignerloss import (
    Banana,
    Cat,
    DCoefficients,
    DegenerateFlat,
    Fock,
    PhaseGrid,
    SqueezedState,
    SqueezeParams,
    UnboundedSqueeze,
    apply_squeeze,
    build_field,
    d_coefficients,
    integrate,
    negativity_volume,
    optimal_squeeze,
    squeezed_vulnerability,
    vulnerability,
    vulnerability_report,
)
from wignerloss.squeeze import minimal_vulnerability, squeeze_matrix

from conftest import field_of, vacuum

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]])


@st.composite
def d_coefficients_psd(draw, margin=0.9):
    d0 = draw(st.floats(0.1, 50.0))
    rho = d0 * draw(st.floats(0.0, margin))
    angle = draw(st.floats(0.0, 2 * math.pi))
    return DCoefficients(d0, rho * math.sin(angle), rho * math.cos(angle))


def test_params_normalization():
    assert SqueezeParams(0.5, math.pi + 0.25).phi == pytest.approx(0.25)
    assert SqueezeParams(0.5, -1e-18).phi == 0.0
    with pytest.raises(ValueError):
        SqueezeParams(-0.1, 0.0)


@settings(max_examples=30)
@given(st.floats(0, 2), st.floats(-4, 4))
def test_squeeze_matrix_structure(r, phi):
    m = squeeze_matrix(r, phi)
    assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(m, m.T, atol=1e-12)
    expected = math.cosh(2 * r) * np.eye(2) + math.sinh(2 * r) * (math.cos(2 * phi) * SIGMA3 + math.sin(2 * phi) * SIGMA1)
    np.testing.assert_allclose(m @ m, expected, atol=1e-9 * math.cosh(2 * r))
    np.testing.assert_allclose(squeeze_matrix(r, phi + math.pi), m, atol=1e-12)


def test_zero_squeeze_is_identity():
    g = PhaseGrid.square(7.0, 128)
    np.testing.assert_array_equal(apply_squeeze(Fock(2), SqueezeParams(0.0, 1.0), g).values,
                                  build_field(Fock(2), g).values)


@settings(max_examples=8, deadline=None)
@given(st.sampled_from([Fock(1), Cat(2.0), Banana.from_R(3.0, 1.5)]), st.floats(0, 1.2), st.floats(0, math.pi))
def test_squeeze_preserves_normalization(state, r, phi):
    assert integrate(apply_squeeze(state, SqueezeParams(r, phi))) == pytest.approx(1.0, abs=1e-3)


def test_squeezed_grid_follows_stretch():
    state = SqueezedState(Fock(1), SqueezeParams(1.0, 0.0))
    g = state.default_grid()
    # phi = 0 gives M = diag(e^r, e^-r): W(Mv) is stretched along y
    assert g.y_max > 2.0 * g.x_max


def test_cat_optimal_squeeze_keeps_negativity():
    base = negativity_volume(build_field(Cat(3.6))).v_neg
    params = optimal_squeeze(d_coefficients(build_field(Cat(3.6))))
    assert negativity_volume(apply_squeeze(Cat(3.6), params)).v_neg == pytest.approx(base, abs=1e-3)


@pytest.mark.parametrize("n", range(1, 7))
def test_fock_d_coefficients_are_isotropic(n):
    d = d_coefficients(build_field(Fock(n)))
    assert d.d0 > 0
    assert abs(d.d1) <= 1e-3 * d.d0 and abs(d.d3) <= 1e-3 * d.d0


def test_positive_field_has_zero_d():
    d = d_coefficients(field_of(vacuum, PhaseGrid.square(6.0, 128)))
    assert (d.d0, d.d1, d.d3) == (0.0, 0.0, 0.0)
    assert vulnerability(field_of(vacuum, PhaseGrid.square(6.0, 128))) == 0.0


def test_cat_orientation():
    d = d_coefficients(build_field(Cat(2.0)))
    # fringes cos(2 sqrt2 alpha y) oscillate along y: curvature of the
    # negative troughs is mostly d^2/dy^2, so d3 < 0 and phi_opt = 0
    assert d.d0 > 0 and d.d3 < 0 and abs(d.d1) < 1e-6 * d.d0
    params = optimal_squeeze(d)
    assert min(params.phi, math.pi - params.phi) < 1e-6
    # direct check: squeezing along the other axis makes things worse
    better = vulnerability(apply_squeeze(Cat(2.0), SqueezeParams(0.3, 0.0)))
    worse = vulnerability(apply_squeeze(Cat(2.0), SqueezeParams(0.3, math.pi / 2)))
    assert better < d.d0 / 4 < worse


@pytest.mark.parametrize("state", [Fock(2), Cat(2.0), Cat(3.6), Banana.from_R(5.0, 1.5)])
def test_psd_invariant(state):
    assert d_coefficients(build_field(state)).satisfies_psd()


def test_optimal_squeeze_examples():
    p = optimal_squeeze(DCoefficients(1.0, 0.0, 0.0))
    assert p.r == 0.0 and p.phi == 0.0 and p.degenerate

    p = optimal_squeeze(DCoefficients(2.0, 0.0, 1.0))
    assert p.r == pytest.approx(math.log(3) / 4, rel=1e-14)
    assert p.phi == pytest.approx(math.pi / 2, rel=1e-14)

    p = optimal_squeeze(DCoefficients(2.0, 1.0, 0.0))
    assert p.r == pytest.approx(math.log(3) / 4, rel=1e-14)
    assert p.phi == pytest.approx(3 * math.pi / 4, rel=1e-14)


def test_optimal_squeeze_errors():
    with pytest.raises(DegenerateFlat):
        optimal_squeeze(DCoefficients(0.0, 0.0, 0.0))
    with pytest.raises(DegenerateFlat):
        optimal_squeeze(DCoefficients(-1.0, 0.0, 0.0))
    with pytest.raises(UnboundedSqueeze):
        optimal_squeeze(DCoefficients(1.0, 0.6, 0.8))


def test_squeezed_vulnerability_examples():
    d = DCoefficients(2.0, 0.7, -1.1)
    for phi in (0.0, 1.0, 2.5):
        assert squeezed_vulnerability(d, SqueezeParams(0.0, phi)) == pytest.approx(0.5, rel=1e-15)
    v = squeezed_vulnerability(DCoefficients(2.0, 0.0, 1.0), SqueezeParams(math.log(3) / 4, math.pi / 2))
    assert v == pytest.approx(math.sqrt(3) / 4, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(d_coefficients_psd())
def test_optimum_value_is_eq15(d):
    params = optimal_squeeze(d)
    expected = math.sqrt(d.d0**2 - d.d1**2 - d.d3**2) / 4
    assert squeezed_vulnerability(d, params) == pytest.approx(expected, rel=1e-9, abs=1e-12)
    assert minimal_vulnerability(d) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(d_coefficients_psd(margin=0.95))
def test_optimum_matches_numerical_minimization(d):
    # Cartesian (u, v) = r (cos 2phi, sin 2phi) has no flat r = 0 edge
    def objective(p):
        return squeezed_vulnerability(d, SqueezeParams(math.hypot(*p), 0.5 * math.atan2(p[1], p[0])))

    us, vs = np.meshgrid(np.linspace(-3, 3, 61), np.linspace(-3, 3, 61))
    values = np.vectorize(lambda u, v: objective((u, v)))(us, vs)
    k = np.unravel_index(np.argmin(values), values.shape)
    x0 = [us[k], vs[k]]
    simplex = [x0, [x0[0] + 0.1, x0[1]], [x0[0], x0[1] + 0.1]]
    best = minimize(objective, x0, method="Nelder-Mead",
                    options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000})
    analytic = squeezed_vulnerability(d, optimal_squeeze(d))
    assert best.fun == pytest.approx(analytic, rel=1e-6)


@pytest.mark.parametrize("params", [SqueezeParams(0.3, 0.4), SqueezeParams(0.5, 1.3), SqueezeParams(0.4, 2.6)])
def test_eq13_sign_against_squeezed_field(params):
    """Arbiter for the sin(2 phi) sign: measure the squeezed field directly."""
    state = Banana.from_R(3.0, 1.5)  # anisotropic with d1 != 0
    d = d_coefficients(build_field(state, state.default_grid(1024)))
    assert abs(d.d1) > 0.1 * d.d0
    measured = vulnerability(apply_squeeze(state, params, SqueezedState(state, params).default_grid(1024)))
    flipped = SqueezeParams(params.r, -params.phi)  # the other sign convention
    assert measured == pytest.approx(squeezed_vulnerability(d, params), rel=0.02)
    assert abs(measured - squeezed_vulnerability(d, flipped)) > 0.05 * measured


def test_vulnerability_fock1_finite_difference():
    from wignerloss import apply_loss

    from wignerloss import lossy_grid

    delta = 1e-3
    g = lossy_grid(Fock(1), 1 - delta)
    v1 = negativity_volume(apply_loss(Fock(1), g, 1.0)).v_neg
    v2 = negativity_volume(apply_loss(Fock(1), g, 1 - delta)).v_neg
    assert vulnerability(build_field(Fock(1), g)) == pytest.approx((v1 - v2) / delta, rel=0.02)


def test_fock_vulnerability_increases():
    values = [vulnerability(build_field(Fock(n))) for n in range(1, 7)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_report_invariants():
    report = vulnerability_report(build_field(Cat(3.6)))
    assert report.v_org == report.d.d0 / 4
    assert 0 <= report.v_sqz <= report.v_org + 1e-12
    assert not report.degenerate
    assert set(report.as_dict()) >= {"d0", "d1", "d3", "v_org", "v_sqz", "r_opt", "phi_opt", "degenerate"}


def test_fock_report_is_degenerate():
    report = vulnerability_report(build_field(Fock(3)))
    assert report.degenerate and report.params.r == 0.0
    assert report.v_sqz == pytest.approx(report.v_org, rel=1e-9)


def test_self_consistency_at_optimum():
    state = Cat(2.0)
    params = optimal_squeeze(d_coefficients(build_field(state)))
    again = optimal_squeeze(d_coefficients(apply_squeeze(state, params)))
    assert again.r <= 0.05
