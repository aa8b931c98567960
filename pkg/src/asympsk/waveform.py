"""Monte-Carlo synthesis of the multi-carrier waveform and empirical ``z_DC``.

The RF signal ``y(t) = Re{A(t) exp(j 2 pi f0 t)}`` is never sampled at the
carrier rate.  With ``f0 >> N df`` the carrier-period averages are
``<y^2> = |A|^2 / 2`` and ``<y^4> = 3 |A|^4 / 8``, so only the complex
baseband envelope ``A(t) = sum_n X_n exp(j 2 pi n df t)`` is simulated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constellation import Constellation, validate_pmf
from .energy import EnergyParams, zdc_from_moments

DEFAULT_SYMBOLS = 500
OVERSAMPLE = 8
_BLOCK = 64


@dataclass(frozen=True)
class UniformPhase:
    """i.i.d. carrier phases ``U[-delta, delta]``."""

    delta: float

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.uniform(-self.delta, self.delta, size=shape)


@dataclass(frozen=True)
class ConstellationPhase:
    """i.i.d. PSK symbols drawn with probabilities ``pmf``."""

    constellation: Constellation
    pmf: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pmf", validate_pmf(self.pmf, self.constellation.M))

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        idx = rng.choice(self.constellation.M, size=shape, p=self.pmf)
        return self.constellation.phases[idx]


@dataclass(frozen=True)
class TxConfig:
    N: int
    P: float = 1e-5
    phase_source: UniformPhase | ConstellationPhase = UniformPhase(0.0)
    bandwidth: float = 10e6
    num_symbols: int = DEFAULT_SYMBOLS
    seed: int = 0
    oversample: int = OVERSAMPLE
    f0: float = 5.18e9  # metadata only

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.num_symbols < 1:
            raise ValueError("num_symbols must be >= 1")
        if self.P <= 0:
            raise ValueError("P must be positive")

    @property
    def delta_f(self) -> float:
        return self.bandwidth / self.N

    @property
    def symbol_period(self) -> float:
        return 1.0 / self.delta_f

    @property
    def samples_per_symbol(self) -> int:
        return self.oversample * self.N

    @property
    def amplitude(self) -> float:
        return float(np.sqrt(2 * self.P / self.N))

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def envelope_from_symbols(X: np.ndarray, samples_per_symbol: int) -> np.ndarray:
    """Sample ``sum_n X_n exp(j 2 pi n t / T)`` at ``samples_per_symbol`` points per period.

    ``X`` has shape ``(symbols, N)``; returns shape ``(symbols, samples_per_symbol)``.
    """
    X = np.atleast_2d(X)
    N = X.shape[1]
    if samples_per_symbol < 4 * N:
        raise ValueError(f"undersampled: {samples_per_symbol} < 4N = {4 * N} samples per period")
    # ifft carries a 1/L factor
    return np.fft.ifft(X, n=samples_per_symbol, axis=1) * samples_per_symbol


def synthesize_envelope(cfg: TxConfig, rng: np.random.Generator, num_symbols: int | None = None) -> np.ndarray:
    """Draw carrier phases for each symbol period and return the sampled envelope."""
    if cfg.samples_per_symbol < 4 * cfg.N:
        raise ValueError("undersampled envelope")
    K = cfg.num_symbols if num_symbols is None else num_symbols
    phases = cfg.phase_source.draw(rng, (K, cfg.N))
    X = cfg.amplitude * np.exp(1j * phases)
    return envelope_from_symbols(X, cfg.samples_per_symbol)


def empirical_moments(A) -> tuple[float, float]:
    """Carrier-averaged ``(E{y^2}, E{y^4})`` from envelope samples."""
    A = np.asarray(A)
    if A.size == 0:
        raise ValueError("no samples")
    a2 = np.abs(A) ** 2
    return float(a2.mean() / 2), float(3 * np.mean(a2**2) / 8)


@dataclass(frozen=True)
class MonteCarloResult:
    zdc: float
    stderr: float
    m2: float
    m4: float
    num_symbols: int


def monte_carlo_zdc(cfg: TxConfig, e: EnergyParams, rng: np.random.Generator | None = None) -> MonteCarloResult:
    """Average ``z_DC`` over ``cfg.num_symbols`` independent symbol periods.

    ``stderr`` is the standard error of the fourth-order term across periods.
    """
    if not np.isclose(cfg.P, e.P, rtol=1e-12) or cfg.N != e.N:
        raise ValueError("TxConfig and EnergyParams disagree on P or N")
    rng = cfg.rng() if rng is None else rng
    per2 = np.empty(cfg.num_symbols)
    per4 = np.empty(cfg.num_symbols)
    for start in range(0, cfg.num_symbols, _BLOCK):
        k = min(_BLOCK, cfg.num_symbols - start)
        a2 = np.abs(synthesize_envelope(cfg, rng, k)) ** 2
        per2[start : start + k] = a2.mean(axis=1) / 2
        per4[start : start + k] = 3 * np.mean(a2**2, axis=1) / 8
    m2, m4 = float(per2.mean()), float(per4.mean())
    K = cfg.num_symbols
    sd = per4.std(ddof=1) if K > 1 else np.inf
    stderr = e.k4 * e.R_s**2 * sd / np.sqrt(K)
    return MonteCarloResult(zdc_from_moments(m2, m4, e), float(stderr), m2, m4, K)
