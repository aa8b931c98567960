"""M-ary PSK constellations restricted to a phase arc, and symbol p.m.f. helpers.

Symbols are indexed by descending phase: index 0 sits at ``+delta`` and index
``M - 1`` at ``-delta``.  For ``M = 4`` the outer symbols are therefore 0 and 3,
the inner ones 1 and 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

PMF_TOL = 1e-12


class ConstellationError(ValueError):
    """Invalid constellation order or phase range."""


class InvalidOrderError(ConstellationError):
    pass


class InvalidRangeError(ConstellationError):
    pass


class PmfError(ValueError):
    """Probability vector off the simplex or of the wrong length."""


@dataclass(frozen=True)
class Constellation:
    """PSK geometry: ``M`` unit-circle phases spanning ``[-delta, delta]``.

    ``amplitude`` scales every symbol; it is ``sqrt(gamma)`` for rate
    computations and ``sqrt(2P/N)`` for waveform synthesis.
    """

    M: int
    delta: float
    amplitude: float = 1.0
    phases: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        M, delta = self.M, self.delta
        if int(M) != M or M < 2 or M % 2:
            raise InvalidOrderError(f"M must be an even integer >= 2, got {M!r}")
        if not (0.0 < delta <= np.pi):
            raise InvalidRangeError(f"delta must lie in (0, pi], got {delta!r}")
        if self.amplitude < 0:
            raise InvalidRangeError(f"amplitude must be >= 0, got {self.amplitude!r}")
        object.__setattr__(self, "M", int(M))
        object.__setattr__(self, "phases", _phases(int(M), float(delta)))
        self.phases.setflags(write=False)

    @property
    def symmetric(self) -> bool:
        return self.delta == np.pi

    @property
    def spacing(self) -> float:
        """Phase gap between neighbouring symbols."""
        if self.symmetric:
            return 2 * np.pi / self.M
        return 2 * self.delta / (self.M - 1)

    @property
    def symbols(self) -> np.ndarray:
        return self.amplitude * np.exp(1j * self.phases)

    def with_amplitude(self, amplitude: float) -> "Constellation":
        return Constellation(self.M, self.delta, amplitude)

    def to_dict(self, probs=None) -> dict:
        d = {
            "M": self.M,
            "delta": self.delta,
            "amplitude": self.amplitude,
            "phases": self.phases.tolist(),
        }
        if probs is not None:
            d["probs"] = validate_pmf(probs, self.M).tolist()
        return d

    def to_json(self, probs=None) -> str:
        return json.dumps(self.to_dict(probs))

    @classmethod
    def from_dict(cls, d: dict) -> tuple["Constellation", np.ndarray | None]:
        """Inverse of :meth:`to_dict`; returns ``(constellation, probs or None)``."""
        c = cls(int(d["M"]), float(d["delta"]), float(d.get("amplitude", 1.0)))
        if "phases" in d and not np.allclose(d["phases"], c.phases, rtol=0, atol=1e-12):
            raise ConstellationError("stored phases disagree with (M, delta)")
        probs = d.get("probs")
        return c, (None if probs is None else validate_pmf(probs, c.M))

    @classmethod
    def from_json(cls, s: str):
        return cls.from_dict(json.loads(s))


def _phases(M: int, delta: float) -> np.ndarray:
    # odd multiples (2m+1) of the half-gap, listed from the top of the arc down
    odd = np.arange(M - 1, -M, -2, dtype=float)
    if delta == np.pi:
        return odd * np.pi / M
    return odd * delta / (M - 1)


def build_constellation(M: int, delta: float, amplitude: float = 1.0) -> Constellation:
    """Asymmetric M-PSK on ``[-delta, delta]``; ``delta = pi`` gives standard M-PSK."""
    return Constellation(M, delta, amplitude)


def validate_pmf(p, M: int | None = None) -> np.ndarray:
    """Return ``p`` as a float array after checking it lies on the simplex."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise PmfError("p.m.f. must be one-dimensional")
    if M is not None and p.size != M:
        raise PmfError(f"p.m.f. has {p.size} entries, constellation has {M}")
    if np.any(p < 0) or np.any(p > 1):
        raise PmfError("p.m.f. entries must lie in [0, 1]")
    if abs(p.sum() - 1.0) > PMF_TOL:
        raise PmfError(f"p.m.f. sums to {p.sum()!r}")
    return p


def flipped(p) -> np.ndarray:
    """Reverse the symbol order (the p.m.f. of ``-Phi``)."""
    return np.asarray(p)[::-1].copy()


def uniform_pmf(M: int) -> np.ndarray:
    return np.full(M, 1.0 / M)


def vertex_pmf(M: int, index: int) -> np.ndarray:
    p = np.zeros(M)
    p[index] = 1.0
    return p


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    p = np.maximum(v - css[rho] / (rho + 1), 0.0)
    return p / p.sum()
