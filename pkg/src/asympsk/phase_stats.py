"""Distribution of the fourth-order phase combination ``Phi0 + Phi1 - Phi2 - Phi3``.

The fourth-order rectifier term scales with ``xi = E{cos Theta}``.  For PSK
inputs ``Theta`` is discrete and its p.m.f. is the four-fold convolution
``p * p * flip(p) * flip(p)``; for i.i.d. continuous phases ``U[-delta, delta]``
it is a four-fold convolution of uniform densities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import Constellation, PmfError, flipped, validate_pmf


@dataclass(frozen=True)
class ThetaDistribution:
    support: np.ndarray
    probs: np.ndarray

    @property
    def xi(self) -> float:
        return float(np.cos(self.support) @ self.probs)


@dataclass(frozen=True)
class ContinuousThetaPdf:
    delta: float
    theta: np.ndarray
    density: np.ndarray

    @property
    def step(self) -> float:
        return float(self.theta[1] - self.theta[0])

    def variance(self) -> float:
        return float(np.sum(self.theta**2 * self.density) * self.step)


def convolve_exact(a, b) -> np.ndarray:
    """Direct-summation convolution accumulated in extended precision."""
    a = np.asarray(a, dtype=np.longdouble)
    b = np.asarray(b, dtype=np.longdouble)
    out = np.zeros(a.size + b.size - 1, dtype=np.longdouble)
    for i, ai in enumerate(a):
        out[i : i + b.size] += ai * b
    return out


def theta_support(c: Constellation) -> np.ndarray:
    k = np.arange(4 * (c.M - 1) + 1)
    if c.symmetric:
        return (-4 * (c.M - 1) + 2 * k) * np.pi / c.M
    return -4 * c.delta + 2 * c.delta * k / (c.M - 1)


def _quartic_conv(p) -> np.ndarray:
    pf = flipped(p)
    return convolve_exact(convolve_exact(p, p), convolve_exact(pf, pf))


def theta_pmf(p, c: Constellation) -> ThetaDistribution:
    """P.m.f. of ``Theta`` on its ``4M - 3`` equally spaced support points."""
    try:
        p = validate_pmf(p, c.M)
    except PmfError as exc:
        raise PmfError(f"dimension mismatch or invalid p.m.f.: {exc}") from None
    probs = _quartic_conv(p)
    return ThetaDistribution(theta_support(c), np.asarray(probs, dtype=float))


def xi(p, c: Constellation) -> float:
    """``E{cos Theta}`` computed from the convolution p.m.f."""
    p = validate_pmf(p, c.M)
    cos_t = np.cos(theta_support(c)).astype(np.longdouble)
    return float(cos_t @ _quartic_conv(p))


def xi_unchecked(p, c: Constellation) -> float:
    # used inside optimizers whose iterates may sit slightly off the simplex
    cos_t = np.cos(theta_support(c))
    pf = np.asarray(p, dtype=float)[::-1]
    return float(cos_t @ np.convolve(np.convolve(p, p), np.convolve(pf, pf)))


def continuous_theta_pdf(delta: float, grid_points: int = 256) -> ContinuousThetaPdf:
    """Numerical density of the sum of four i.i.d. ``U[-delta, delta]`` phases.

    The uniform density is sampled at ``grid_points`` cell centres; three
    discrete convolutions give the density on ``4 * grid_points - 3`` points.
    Differences of uniforms are sums of uniforms because the density is even.
    """
    if not (0 < delta <= np.pi):
        raise ValueError(f"delta must lie in (0, pi], got {delta!r}")
    if grid_points < 64:
        raise ValueError("grid_points must be >= 64")
    h = 2 * delta / grid_points
    centres = -delta + h * (np.arange(grid_points) + 0.5)
    w = np.full(grid_points, 1.0 / grid_points)
    w2 = np.convolve(w, w)
    pmf = np.convolve(w2, w2)
    pmf = 0.5 * (pmf + pmf[::-1])
    theta = 4 * centres[0] + h * np.arange(pmf.size)
    return ContinuousThetaPdf(delta, theta, pmf / h)


def gaussian_theta_approx(delta: float) -> tuple[float, float]:
    """Mean and variance of the normal approximation of ``Theta``."""
    return 0.0, 4.0 * delta**2 / 3.0


def gaussian_theta_density(theta, delta: float) -> np.ndarray:
    _, var = gaussian_theta_approx(delta)
    theta = np.asarray(theta, dtype=float)
    return np.exp(-(theta**2) / (2 * var)) / np.sqrt(2 * np.pi * var)


def expected_cos_continuous(delta: float, mode: str = "gaussian") -> float:
    """``E{cos Theta}`` for continuous uniform phases.

    ``"gaussian"`` uses the normal approximation ``exp(-2 delta^2 / 3)``;
    ``"exact"`` uses the characteristic function ``(sin(delta)/delta)^4``.
    """
    if not (0 <= delta <= np.pi):
        raise ValueError(f"delta must lie in [0, pi], got {delta!r}")
    if mode == "gaussian":
        return float(np.exp(-2 * delta**2 / 3))
    if mode == "exact":
        return float(np.sinc(delta / np.pi) ** 4)
    raise ValueError(f"unknown mode {mode!r}")
