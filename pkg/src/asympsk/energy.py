"""Truncated diode model and the ``z_DC`` harvested-current metric.

``z_DC = k2 Rs E{E{y^2}} + k4 Rs^2 E{E{y^4}}`` in amperes.  Two closed-form
scaling laws in the carrier count ``N`` are provided: one for continuous
uniform phases and one for discrete PSK phases through ``xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# typical zero-bias Schottky diode
DEFAULT_IS = 5e-6
DEFAULT_N = 1.05
DEFAULT_VT = 25.86e-3
NOMINAL_K2 = 0.0034
NOMINAL_K4 = 0.3829


@dataclass(frozen=True)
class DiodeParams:
    i_s: float = DEFAULT_IS
    n: float = DEFAULT_N
    v_t: float = DEFAULT_VT

    def __post_init__(self):
        if min(self.i_s, self.n, self.v_t) <= 0:
            raise ValueError("diode parameters must be strictly positive")


def taylor_coefficients(d: DiodeParams, a: float = 0.0, order: int = 4) -> np.ndarray:
    """Coefficients ``k_0 .. k_order`` of the diode current around ``v_d = a``."""
    if order < 2:
        raise ValueError("order must be >= 2")
    nvt = d.n * d.v_t
    ea = math.exp(a / nvt)
    k = [d.i_s * (ea - 1.0)]
    k += [d.i_s * ea / (math.factorial(i) * nvt**i) for i in range(1, order + 1)]
    return np.array(k)


@dataclass(frozen=True)
class EnergyParams:
    """Rectifier and transmit parameters entering ``z_DC``.

    Defaults: nominal zero-bias diode coefficients, a 50 ohm antenna, -20 dBm and 8 carriers.
    """

    k2: float = NOMINAL_K2
    k4: float = NOMINAL_K4
    R_s: float = 50.0
    P: float = 1e-5
    N: int = 8

    def __post_init__(self):
        if min(self.k2, self.k4, self.R_s, self.P) <= 0:
            raise ValueError("k2, k4, R_s and P must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "N", int(self.N))

    @classmethod
    def from_diode(cls, d: DiodeParams, a: float = 0.0, **kw) -> "EnergyParams":
        k = taylor_coefficients(d, a, 4)
        return cls(k2=float(k[2]), k4=float(k[4]), **kw)

    def with_(self, **kw) -> "EnergyParams":
        return replace(self, **kw)

    @property
    def second_order(self) -> float:
        return self.k2 * self.R_s * self.P

    @property
    def fourth_order_scale(self) -> float:
        """Fourth-order term at ``xi = 1``."""
        N = self.N
        return self.k4 * self.R_s**2 * (2 * N * N + 1) / (2 * N) * self.P**2


def zdc_from_moments(m2: float, m4: float, e: EnergyParams) -> float:
    if m2 < 0 or m4 < 0:
        raise ValueError("moments must be nonnegative")
    return e.k2 * e.R_s * m2 + e.k4 * e.R_s**2 * m4


def scaling_discrete(xi: float, e: EnergyParams) -> float:
    if not (-1 - 1e-12 <= xi <= 1 + 1e-12):
        raise ValueError(f"xi must lie in [-1, 1], got {xi!r}")
    return e.second_order + e.fourth_order_scale * xi


def scaling_continuous(delta: float, e: EnergyParams) -> float:
    if not (0 <= delta <= np.pi):
        raise ValueError(f"delta must lie in [0, pi], got {delta!r}")
    return scaling_discrete(math.exp(-2 * delta**2 / 3), e)


def dbm_to_watts(x: float) -> float:
    return 10 ** ((x - 30) / 10)


def watts_to_dbm(x: float) -> float:
    if x <= 0:
        raise ValueError("power must be positive")
    return 10 * math.log10(x) + 30


def db_to_linear(x: float) -> float:
    return 10 ** (x / 10)
