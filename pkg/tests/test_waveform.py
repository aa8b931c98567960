import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asympsk.constellation import Constellation, uniform_pmf
from asympsk.energy import EnergyParams, scaling_continuous
from asympsk.waveform import (
    ConstellationPhase,
    TxConfig,
    UniformPhase,
    empirical_moments,
    envelope_from_symbols,
    monte_carlo_zdc,
    synthesize_envelope,
)

PI = np.pi
P = 1e-5


def _run(N, source, symbols=500, seed=7):
    e = EnergyParams(N=N, P=P)
    cfg = TxConfig(N=N, P=P, phase_source=source, num_symbols=symbols)
    return monte_carlo_zdc(cfg, e, np.random.default_rng(seed)), e


def test_in_phase_peak():
    cfg = TxConfig(N=4, phase_source=UniformPhase(0.0))
    A = synthesize_envelope(cfg, np.random.default_rng(0), 1)
    assert abs(A[0, 0]) == pytest.approx(4 * np.sqrt(2 * P / 4))


def test_degenerate_pmf_repeats():
    c = Constellation(2, PI / 4)
    cfg = TxConfig(N=8, phase_source=ConstellationPhase(c, [1.0, 0.0]))
    A = synthesize_envelope(cfg, np.random.default_rng(1), 5)
    assert np.all(A == A[0])


def test_parseval_uniform_pi():
    cfg = TxConfig(N=64, phase_source=UniformPhase(PI))
    A = synthesize_envelope(cfg, np.random.default_rng(2), 50)
    assert empirical_moments(A)[0] == pytest.approx(P, rel=0.02)


def test_undersampling_rejected():
    with pytest.raises(ValueError):
        envelope_from_symbols(np.ones((1, 8)), 31)
    with pytest.raises(ValueError):
        synthesize_envelope(TxConfig(N=8, oversample=2), np.random.default_rng(0))


def test_constant_envelope_moments():
    c = 0.3 + 0.4j
    m2, m4 = empirical_moments(np.full(10, c))
    assert m2 == pytest.approx(0.25 / 2)
    assert m4 == pytest.approx(3 * 0.25**2 / 8)
    with pytest.raises(ValueError):
        empirical_moments([])


def test_coherent_fourth_moment():
    N = 8
    cfg = TxConfig(N=N, phase_source=UniformPhase(0.0))
    A = synthesize_envelope(cfg, np.random.default_rng(0), 3)
    assert empirical_moments(A)[1] == pytest.approx(P * P * (2 * N * N + 1) / (2 * N), rel=1e-12)


def test_fourth_moment_pi3_n32():
    res, e = _run(32, UniformPhase(PI / 3))
    expected = e.fourth_order_scale * np.exp(-2 * (PI / 3) ** 2 / 3) / (e.k4 * e.R_s**2)
    assert res.m4 == pytest.approx(expected, rel=0.10)


@settings(max_examples=10)
@given(delta=st.floats(0, PI), N=st.sampled_from([1, 4, 16, 64]))
def test_second_moment_is_power(delta, N):
    res, _ = _run(N, UniformPhase(delta), symbols=500, seed=3)
    assert res.m2 == pytest.approx(P, rel=0.02)


@pytest.mark.parametrize("M", [2, 4, 8])
def test_second_moment_is_power_constellation(M):
    p = np.random.default_rng(M).dirichlet(np.ones(M))
    res, _ = _run(16, ConstellationPhase(Constellation(M, PI / 3), p))
    assert res.m2 == pytest.approx(P, rel=0.02)


def test_determinism():
    a, _ = _run(16, UniformPhase(PI / 6), symbols=100, seed=11)
    b, _ = _run(16, UniformPhase(PI / 6), symbols=100, seed=11)
    assert a == b
    cfg = TxConfig(N=8, phase_source=UniformPhase(1.0), seed=5)
    np.testing.assert_array_equal(synthesize_envelope(cfg, cfg.rng()), synthesize_envelope(cfg, cfg.rng()))


def test_delta_zero_matches_law_for_large_n():
    for N in (16, 64, 256):
        res, e = _run(N, UniformPhase(0.0), symbols=20)
        assert res.zdc == pytest.approx(scaling_continuous(0.0, e), rel=0.10)


def test_small_n_exceeds_law():
    for delta in (PI / 6, PI / 3, PI / 2):
        res, e = _run(1, UniformPhase(delta), symbols=2000)
        assert res.zdc > scaling_continuous(delta, e)


@pytest.mark.parametrize("M", [4, 16])
def test_uniform_symmetric_psk_like_continuous(M):
    cont, _ = _run(64, UniformPhase(PI), seed=21)
    disc, _ = _run(64, ConstellationPhase(Constellation(M, PI), uniform_pmf(M)), seed=22)
    assert disc.zdc == pytest.approx(cont.zdc, rel=0.10)


def test_single_symbol_stderr_undefined():
    res, _ = _run(8, UniformPhase(1.0), symbols=1)
    assert res.num_symbols == 1 and np.isinf(res.stderr)


def test_config_checks():
    with pytest.raises(ValueError):
        TxConfig(N=0)
    with pytest.raises(ValueError):
        TxConfig(N=4, num_symbols=0)
    cfg = TxConfig(N=10)
    assert cfg.delta_f * cfg.symbol_period == pytest.approx(1.0)
    with pytest.raises(ValueError):
        monte_carlo_zdc(cfg, EnergyParams(N=8))
