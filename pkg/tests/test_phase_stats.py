import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asympsk.constellation import Constellation, PmfError, flipped, uniform_pmf, vertex_pmf
from asympsk.phase_stats import (
    continuous_theta_pdf,
    expected_cos_continuous,
    gaussian_theta_approx,
    gaussian_theta_density,
    theta_pmf,
    theta_support,
    xi,
    xi_unchecked,
)
from conftest import pmfs
from oracles import theta_pmf_closed_form_m4, theta_pmf_quadruples, xi_moment, xi_quadruples

PI = np.pi


def test_degenerate_bpsk_point_mass():
    d = theta_pmf([1, 0], Constellation(2, PI / 4))
    k = np.argmax(d.probs)
    assert d.probs[k] == 1.0 and d.support[k] == pytest.approx(0.0)
    assert d.probs.sum() == 1.0


def test_closed_form_uniform_symmetric():
    p = uniform_pmf(4)
    np.testing.assert_allclose(theta_pmf(p, Constellation(4, PI)).probs, theta_pmf_closed_form_m4(p), atol=1e-15)


def test_closed_form_and_enumeration_agree():
    c = Constellation(4, PI / 3)
    p = np.array([0.4, 0.3, 0.2, 0.1])
    d = theta_pmf(p, c)
    np.testing.assert_allclose(d.probs, theta_pmf_closed_form_m4(p), atol=1e-15)
    np.testing.assert_allclose(d.probs, theta_pmf_quadruples(p, c.phases, d.support), atol=1e-15)


def test_dimension_mismatch():
    with pytest.raises(PmfError):
        theta_pmf([0.5, 0.5], Constellation(4, 1.0))


@pytest.mark.parametrize("M", [2, 4, 8, 16])
@pytest.mark.parametrize("delta", [PI / 7, PI / 3, PI])
def test_support_shape(M, delta):
    c = Constellation(M, delta)
    s = theta_support(c)
    assert s.size == 4 * M - 3
    gap = 2 * PI / M if c.symmetric else 2 * delta / (M - 1)
    np.testing.assert_allclose(np.diff(s), gap, rtol=1e-12)


@pytest.mark.parametrize("M", [2, 4, 8, 16])
@pytest.mark.parametrize("delta", [0.1, PI / 3, PI])
def test_single_symbol_xi_is_one(M, delta):
    c = Constellation(M, delta)
    for m in (0, M // 2, M - 1):
        assert xi(vertex_pmf(M, m), c) == pytest.approx(1.0, abs=1e-15)


def test_uniform_symmetric_qpsk_xi_zero():
    assert abs(xi(uniform_pmf(4), Constellation(4, PI))) < 1e-15


def test_uniform_pi3_matches_256_quadruples():
    c = Constellation(4, PI / 3)
    assert xi(uniform_pmf(4), c) == pytest.approx(xi_quadruples(uniform_pmf(4), c.phases), abs=1e-12)


@settings(max_examples=60)
@given(M=st.sampled_from([2, 4, 6, 8]), delta=st.floats(0.05, PI), data=st.data())
def test_xi_oracles(M, delta, data):
    p = data.draw(pmfs(M))
    c = Constellation(M, delta)
    v = xi(p, c)
    assert -1 - 1e-12 <= v <= 1 + 1e-12
    assert v == pytest.approx(xi_moment(p, c.phases), abs=1e-12)
    assert xi_unchecked(p, c) == pytest.approx(v, abs=1e-12)
    assert xi(flipped(p), c) == pytest.approx(v, abs=1e-14)


@settings(max_examples=15)
@given(M=st.sampled_from([4, 8]), data=st.data())
def test_xi_quadruple_oracle(M, data):
    p = data.draw(pmfs(M))
    c = Constellation(M, data.draw(st.floats(0.05, PI)))
    assert xi(p, c) == pytest.approx(xi_quadruples(p, c.phases), abs=1e-12)


@given(pmfs(4), st.floats(0.05, PI))
def test_theta_pmf_normalized_and_symmetric(p, delta):
    d = theta_pmf(p, Constellation(4, delta))
    assert d.probs.sum() == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(d.probs, d.probs[::-1], atol=1e-15)


@pytest.mark.parametrize("delta", [PI / 6, PI / 3, PI / 2])
def test_discrete_to_continuous_convergence(delta):
    target = expected_cos_continuous(delta, "exact")
    gaps = [abs(xi(uniform_pmf(M), Constellation(M, delta)) - target) for M in (4, 8, 16, 32, 64)]
    assert all(b <= a + 1e-15 for a, b in zip(gaps, gaps[1:]))


def test_continuous_pdf_support_and_peak():
    d = continuous_theta_pdf(PI / 3)
    assert d.theta[0] >= -4 * PI / 3 and d.theta[-1] <= 4 * PI / 3
    assert abs(d.theta[np.argmax(d.density)]) <= d.step
    assert np.sum(d.density) * d.step == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("delta", [0.2, PI / 4, PI / 3, PI])
def test_continuous_pdf_variance(delta):
    assert continuous_theta_pdf(delta, 512).variance() == pytest.approx(4 * delta**2 / 3, rel=1e-3)


def test_continuous_pdf_even():
    d = continuous_theta_pdf(PI / 4)
    np.testing.assert_allclose(d.density, d.density[::-1], atol=1e-12)
    np.testing.assert_allclose(d.theta, -d.theta[::-1], atol=1e-12)


def test_continuous_pdf_close_to_gaussian():
    d = continuous_theta_pdf(PI / 3)
    g = gaussian_theta_density(d.theta, PI / 3)
    assert np.max(np.abs(d.density - g)) < 0.05 * d.density.max()


def test_continuous_pdf_rejects_coarse_grid():
    with pytest.raises(ValueError):
        continuous_theta_pdf(1.0, 32)


def test_gaussian_variance():
    assert gaussian_theta_approx(PI / 3)[1] == pytest.approx(4 * PI**2 / 27)
    assert gaussian_theta_approx(0.0) == (0.0, 0.0)
    assert gaussian_theta_approx(PI)[1] == pytest.approx(4 * PI**2 / 3)


def test_expected_cos_values(rng):
    assert expected_cos_continuous(PI / 3) == pytest.approx(np.exp(-2 * (PI / 3) ** 2 / 3))
    assert expected_cos_continuous(PI / 3) == pytest.approx(0.4814, abs=1e-4)
    exact = expected_cos_continuous(PI / 3, "exact")
    assert exact == pytest.approx((np.sin(PI / 3) / (PI / 3)) ** 4)
    assert exact == pytest.approx(0.4678, abs=1e-4)
    phi = rng.uniform(-PI / 3, PI / 3, size=(400_000, 4))
    mc = np.cos(phi[:, 0] + phi[:, 1] - phi[:, 2] - phi[:, 3]).mean()
    assert mc == pytest.approx(exact, abs=5e-3)
    assert expected_cos_continuous(0.0) == expected_cos_continuous(0.0, "exact") == 1.0
    with pytest.raises(ValueError):
        expected_cos_continuous(1.0, "other")
