"""Achievable rate of PSK over the unit-variance complex AWGN channel.

Two rate notions are kept apart on purpose:

* the continuous-output mutual information ``I(X;Y) = H(Y) - log2(pi e)``,
  used for rate constraints and rate curves, and
* the hard-decision channel obtained from MAP phase regions, whose
  transition matrix feeds the Blahut-Arimoto iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize, special

from .constellation import Constellation, uniform_pmf, validate_pmf

LOG2_PI_E = float(np.log2(np.pi * np.e))
_LN2 = float(np.log(2.0))


class QuadratureError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class AwgnChannel:
    """``Y = sqrt(gamma) e^{j phi} + Z`` with ``Z ~ CN(0, 1)``."""

    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")

    @classmethod
    def from_db(cls, snr_db: float) -> "AwgnChannel":
        return cls(10 ** (snr_db / 10))

    @property
    def amplitude(self) -> float:
        return float(np.sqrt(self.gamma))

    @property
    def snr_db(self) -> float:
        return float(10 * np.log10(self.gamma)) if self.gamma > 0 else -np.inf


def q_function(u):
    """Gaussian upper-tail probability."""
    return special.ndtr(-np.asarray(u, dtype=float))


# --------------------------------------------------------------------------
# continuous-output mutual information


def output_pdf(y, p, c: Constellation, ch: AwgnChannel):
    y = np.asarray(y, dtype=complex)
    x = ch.amplitude * np.exp(1j * c.phases)
    d2 = np.abs(y[..., None] - x) ** 2
    return np.exp(-d2) @ np.asarray(p, dtype=float) / np.pi


class OutputGrid:
    """Tensor trapezoid grid on ``[-(sqrt(gamma)+5), sqrt(gamma)+5]^2``.

    Holds the per-symbol likelihoods ``L[m, g] = exp(-|y_g - x_m|^2) / pi``
    so entropy and its gradient reduce to matrix products.  The integrands are
    Gaussian-smooth, so the trapezoid rule converges geometrically in the
    spacing.
    """

    def __init__(self, c: Constellation, ch: AwgnChannel, spacing: float, margin: float = 5.0):
        self.constellation = c
        self.channel = ch
        self.spacing = spacing
        half = ch.amplitude + margin
        n = int(np.ceil(half / spacing))
        axis = spacing * np.arange(-n, n + 1)
        y = (axis[:, None] + 1j * axis[None, :]).ravel()
        x = ch.amplitude * np.exp(1j * c.phases)
        self.likelihood = np.exp(-np.abs(y[None, :] - x[:, None]) ** 2) / np.pi
        self.weight = spacing * spacing

    @property
    def size(self) -> int:
        return self.likelihood.shape[1]

    def entropy(self, p) -> float:
        """Differential output entropy ``H(Y)`` in bits."""
        py = np.asarray(p, dtype=float) @ self.likelihood
        return float(-self.weight * np.sum(_xlog2x(py)))

    def entropy_many(self, P: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """Vectorised :meth:`entropy` for the rows of ``P``."""
        out = np.empty(P.shape[0])
        for s in range(0, P.shape[0], chunk):
            py = P[s : s + chunk] @ self.likelihood
            out[s : s + chunk] = -self.weight * _xlog2x(py).sum(axis=1)
        return out

    def entropy_grad(self, p) -> np.ndarray:
        """Raw partials ``dH/dp_m`` (not projected onto the simplex)."""
        py = np.asarray(p, dtype=float) @ self.likelihood
        inner = 1.0 / _LN2 + np.log2(np.maximum(py, np.finfo(float).tiny))
        return -self.weight * (self.likelihood @ inner)

    def mutual_information(self, p) -> float:
        return self.entropy(p) - LOG2_PI_E


def _xlog2x(v):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(v > 0, v * np.log2(np.where(v > 0, v, 1.0)), 0.0)


@lru_cache(maxsize=32)
def output_grid(c: Constellation, ch: AwgnChannel, tol: float = 1e-6, h0: float = 0.5, max_halvings: int = 5) -> OutputGrid:
    """Halve the spacing until two successive grids agree to ``tol`` bits (uniform input).

    The coarser grid of the agreeing pair is returned: its difference from the
    finer one bounds its own error.
    """
    p = uniform_pmf(c.M)
    grid = OutputGrid(c, ch, h0)
    H = grid.entropy(p)
    for _ in range(max_halvings):
        finer = OutputGrid(c, ch, grid.spacing / 2)
        Hf = finer.entropy(p)
        if abs(Hf - H) < tol:
            return grid
        grid, H = finer, Hf
    raise QuadratureError(f"output entropy did not converge to {tol} bits")


def mutual_information(p, c: Constellation, ch: AwgnChannel, method: str = "quadrature", *, rng=None, draws: int = 10**6) -> float:
    """``I(X;Y)`` in bits per channel use, clamped to ``[0, log2 M]``."""
    p = validate_pmf(p, c.M)
    if method == "quadrature":
        grid = output_grid(c, ch)
        I = grid.mutual_information(p)
        fine = OutputGrid(c, ch, grid.spacing / 2).mutual_information(p)
        if abs(I - fine) > 1e-3:
            raise QuadratureError(f"grid refinement disagreement {abs(I - fine):.2e} bits")
        I = fine
    elif method in ("monte-carlo", "mc"):
        I, _ = mutual_information_mc(p, c, ch, rng=rng, draws=draws)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(np.clip(I, 0.0, np.log2(c.M)))


def mutual_information_mc(p, c: Constellation, ch: AwgnChannel, rng=None, draws: int = 10**6, chunk: int = 200_000):
    """Monte-Carlo estimate of ``I(X;Y)`` and its standard error (unclamped)."""
    p = validate_pmf(p, c.M)
    rng = np.random.default_rng() if rng is None else rng
    x = ch.amplitude * np.exp(1j * c.phases)
    total = total2 = 0.0
    done = 0
    while done < draws:
        k = min(chunk, draws - done)
        m = rng.choice(c.M, size=k, p=p)
        z = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) * np.sqrt(0.5)
        s = -np.log2(output_pdf(x[m] + z, p, c, ch))
        total += s.sum()
        total2 += (s * s).sum()
        done += k
    mean = total / draws
    var = max(total2 / draws - mean * mean, 0.0)
    return mean - LOG2_PI_E, float(np.sqrt(var / draws))


def max_mutual_information(c: Constellation, ch: AwgnChannel, tol: float = 1e-12):
    """Maximise the continuous-output ``I(X;Y)`` over the simplex.

    Returns ``(rate, pmf)``.  The objective is concave, so any local solver
    finds the global maximum.
    """
    grid = output_grid(c, ch)
    M = c.M
    res = optimize.minimize(
        lambda q: -grid.entropy(q),
        uniform_pmf(M),
        jac=lambda q: -grid.entropy_grad(q),
        method="SLSQP",
        bounds=[(0.0, 1.0)] * M,
        constraints=[{"type": "eq", "fun": lambda q: q.sum() - 1.0, "jac": lambda q: np.ones(M)}],
        options={"ftol": tol, "maxiter": 500},
    )
    q = np.clip(res.x, 0.0, None)
    q /= q.sum()
    return grid.mutual_information(q), q


def sum_rate(I: float, N: int) -> float:
    if I < 0:
        raise ValueError("rate must be nonnegative")
    return N * I


# --------------------------------------------------------------------------
# hard-decision phase channel


def phase_pdf(phi, m: int, c: Constellation, ch: AwgnChannel):
    """Density of the received phase given symbol ``m`` was sent (2 pi periodic)."""
    g = ch.gamma
    d = np.asarray(phi, dtype=float) - c.phases[m]
    cd = np.cos(d)
    return np.exp(-g) / (2 * np.pi) + np.sqrt(g / np.pi) * cd * np.exp(-g * np.sin(d) ** 2) * special.ndtr(np.sqrt(2 * g) * cd)


@dataclass(frozen=True)
class DecisionRegions:
    """Per-symbol phase intervals ``[lower[m], upper[m])``.

    Intervals may extend past ``pi`` (the wrapping region); widths sum to
    ``2 pi``.  Symbols with zero prior get an empty interval.
    """

    lower: np.ndarray
    upper: np.ndarray
    flagged: bool = False

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def boundaries(self) -> np.ndarray:
        """Region borders wrapped to ``[-pi, pi)``."""
        b = np.concatenate([self.lower[self.widths > 0], self.upper[self.widths > 0]])
        return np.unique(np.round((b + np.pi) % (2 * np.pi) - np.pi, 14))


def _log_post(phi, m, prior, c, ch):
    return np.log(prior) + np.log(np.maximum(phase_pdf(phi, m, c, ch), 1e-300))


def map_decision_regions(p, c: Constellation, ch: AwgnChannel, xtol: float = 1e-13) -> DecisionRegions:
    """MAP phase thresholds between phase-adjacent symbols.

    Each threshold is the root of ``p_l f(phi|x_l) = p_k f(phi|x_k)`` on the arc
    joining the two symbols, found by Brent's method.  If the posteriors do
    not cross on the arc (extreme prior skew) the whole arc goes to the more
    probable symbol and ``flagged`` is set.
    """
    p = validate_pmf(p, c.M)
    M = c.M
    lower = np.zeros(M)
    upper = np.zeros(M)
    active = [m for m in range(M) if p[m] > 0]
    if len(active) == 1:
        m = active[0]
        lower[m], upper[m] = c.phases[m] - np.pi, c.phases[m] + np.pi
        return DecisionRegions(lower, upper)
    flagged = False
    # walk the active symbols in ascending phase, closing the circle at the end
    order = active[::-1]
    ph = [c.phases[m] for m in order]
    ph.append(ph[0] + 2 * np.pi)
    cuts = []
    for i, m in enumerate(order):
        k = order[(i + 1) % len(order)]
        a, b = ph[i], ph[i + 1]
        if ch.gamma == 0:
            # flat likelihoods: posteriors never cross; fall back to the arc midpoint
            cuts.append(0.5 * (a + b) if p[m] == p[k] else (b if p[m] > p[k] else a))
            continue
        g = lambda t: _log_post(t, m, p[m], c, ch) - _log_post(t, k, p[k], c, ch)
        ga, gb = g(a), g(b)
        if ga > 0 > gb:
            cuts.append(optimize.brentq(g, a, b, xtol=xtol))
        elif abs(ga) < 1e-15 and abs(gb) < 1e-15:
            cuts.append(0.5 * (a + b))
        else:
            flagged = True
            cuts.append(b if p[m] >= p[k] else a)
    for i, m in enumerate(order):
        lo = cuts[i - 1] - (2 * np.pi if i == 0 else 0.0)
        lower[m], upper[m] = lo, cuts[i]
    return DecisionRegions(lower, upper, flagged)


@dataclass(frozen=True)
class DmcChannel:
    transitions: np.ndarray
    regions: DecisionRegions

    @property
    def boundary_phases(self):
        return list(zip(self.regions.lower, self.regions.upper))


def transition_matrix(p, c: Constellation, ch: AwgnChannel, regions: DecisionRegions | None = None, epsabs: float = 1e-10) -> DmcChannel:
    """``W[m, l] = Pr(decide x_l | sent x_m)`` by adaptive quadrature of the phase density."""
    if regions is None:
        regions = map_decision_regions(p, c, ch)
    M = c.M
    W = np.zeros((M, M))
    for m in range(M):
        for l in range(M):
            lo, hi = regions.lower[l], regions.upper[l]
            if hi <= lo:
                continue
            val, err = integrate.quad(phase_pdf, lo, hi, args=(m, c, ch), epsabs=epsabs, epsrel=1e-12, limit=200, points=None)
            if err > 1e-8:
                raise QuadratureError(f"transition ({m},{l}) error estimate {err:.1e}")
            W[m, l] = val
    drift = np.abs(W.sum(axis=1) - 1.0).max()
    if drift >= 1e-8:
        raise QuadratureError(f"transition rows drift from 1 by {drift:.1e}")
    W /= W.sum(axis=1, keepdims=True)
    return DmcChannel(W, regions)


def dmc_mutual_information(p, W) -> float:
    p = np.asarray(p, dtype=float)
    q = p @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(W > 0, W / q, 1.0)
    return float(np.sum(p[:, None] * W * np.log2(ratio)))


def blahut_arimoto(dmc: DmcChannel | np.ndarray, tol: float = 1e-9, max_iter: int = 100_000, p0=None):
    """Capacity (bits) and capacity-achieving input of a discrete memoryless channel.

    Iterates until the gap between the upper bound ``max_m D(W_m || q)`` and
    the lower bound ``log sum_m p_m exp D(W_m || q)`` drops below ``tol``.
    """
    W = dmc.transitions if isinstance(dmc, DmcChannel) else np.asarray(dmc, dtype=float)
    M = W.shape[0]
    p = uniform_pmf(M) if p0 is None else np.asarray(p0, dtype=float)
    logW = np.log(np.where(W > 0, W, 1.0))
    for _ in range(max_iter):
        q = p @ W
        logq = np.log(np.where(q > 0, q, 1.0))
        D = np.sum(W * (logW - logq), axis=1)  # nats
        c = np.exp(D)
        s = p @ c
        lower, upper = np.log(s), D.max()
        p = p * c / s
        if upper - lower < tol * _LN2:
            return float(dmc_mutual_information(p, W)), p
    raise ConvergenceError(f"Blahut-Arimoto did not converge in {max_iter} iterations")


def ba_optimal_input(c: Constellation, ch: AwgnChannel, tol: float = 1e-9, regions: str = "ml"):
    """Blahut-Arimoto input for the hard-decision channel of ``c``.

    ``regions="ml"`` builds the decision regions with equal priors;
    ``regions="map"`` iterates regions and input to a joint fixed point.
    Returns ``(capacity_bits, pmf, dmc)``.
    """
    p = uniform_pmf(c.M)
    dmc = transition_matrix(p, c, ch)
    cap, p_opt = blahut_arimoto(dmc, tol)
    if regions == "map":
        for _ in range(100):
            dmc = transition_matrix(p_opt, c, ch)
            cap, new = blahut_arimoto(dmc, tol)
            if np.abs(new - p_opt).max() < 1e-9:
                p_opt = new
                break
            p_opt = new
    elif regions != "ml":
        raise ValueError(f"unknown regions mode {regions!r}")
    return cap, p_opt, dmc
