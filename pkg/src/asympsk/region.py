"""Rate-energy region of PSK symbol distributions.

Each boundary point maximises ``xi`` (hence ``z_DC``, which is affine and
increasing in ``xi``) subject to ``I(X;Y) >= R`` on the probability simplex.
``xi`` is a quartic form with mixed-sign coefficients, so only local optimality
is claimed; a simplex-lattice exhaustive search serves as a global check for
small ``M``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .constellation import Constellation, project_to_simplex, validate_pmf, vertex_pmf
from .energy import EnergyParams, scaling_discrete
from .info_rate import LOG2_PI_E, AwgnChannel, OutputGrid, max_mutual_information, output_grid
from .phase_stats import theta_support, xi_unchecked

RATE_TOL = 1e-6
KKT_TOL = 1e-5
_FREE = 1e-9


@dataclass
class RegionPoint:
    rate_bound: float
    zdc: float
    xi: float
    pmf: np.ndarray
    achieved_rate: float
    converged: bool
    kkt_residual: float
    message: str = ""
    iterations: int = 0

    def row(self) -> dict:
        d = {
            "R": self.rate_bound,
            "achieved_rate": self.achieved_rate,
            "xi": self.xi,
            "zdc_uA": self.zdc * 1e6,
        }
        d.update({f"p{m}": float(v) for m, v in enumerate(self.pmf)})
        d["kkt"] = self.kkt_residual
        d["converged"] = self.converged
        return d


def grad_xi(p, c: Constellation) -> np.ndarray:
    """Exact gradient of ``xi(p) = cos(theta) . (p * p * flip(p) * flip(p))``.

    Product rule on the convolution: the two ``p`` factors each contribute
    ``conv(e_m, p) * b`` with ``b = flip(p) * flip(p)``; the two flipped
    factors contribute ``a * conv(e_{M-1-m}, flip(p))`` with ``a = p * p``.
    """
    p = np.asarray(p, dtype=float)
    M = p.size
    pf = p[::-1]
    a = np.convolve(p, p)
    b = np.convolve(pf, pf)
    cos_t = np.cos(theta_support(c))
    pb = np.convolve(p, b)  # conv(e_m, p * b) is a shift by m
    ap = np.convolve(a, pf)  # conv(e_{M-1-m}, a * pf) is a shift by M-1-m
    L = 3 * M - 2
    g = np.empty(M)
    for m in range(M):
        g[m] = 2 * cos_t[m : m + L] @ pb + 2 * cos_t[M - 1 - m : M - 1 - m + L] @ ap
    return g


def grad_entropy(p, c: Constellation, ch: AwgnChannel, grid: OutputGrid | None = None) -> np.ndarray:
    """Raw partials of the output entropy ``H(Y)`` with respect to each ``p_m``."""
    grid = output_grid(c, ch) if grid is None else grid
    return grid.entropy_grad(p)


def _zdc(xi, e):
    return scaling_discrete(float(np.clip(xi, -1.0, 1.0)), e)


def kkt_residual(p, R, c, grid: OutputGrid) -> float:
    """Stationarity/complementarity residual of ``max xi s.t. I >= R, p in simplex``.

    Finds multipliers ``lam`` (sum constraint), ``mu >= 0`` (rate, only when
    active) and ``nu_m >= 0`` (bounds, only where ``p_m = 0``) minimising
    ``|grad xi + mu grad I - lam + nu|``; that minimum plus any rate violation
    is returned.
    """
    p = np.asarray(p, dtype=float)
    M = p.size
    gx = grad_xi(p, c)
    gi = grid.entropy_grad(p)
    slack = grid.mutual_information(p) - R
    at_bound = np.flatnonzero(p <= _FREE)
    cols, lb = [-np.ones(M)], [-np.inf]
    if slack < 1e-7:
        cols.append(gi)
        lb.append(0.0)
    for m in at_bound:
        cols.append(np.eye(M)[m])
        lb.append(0.0)
    A = np.column_stack(cols)
    sol = optimize.lsq_linear(A, -gx, bounds=(lb, np.inf), tol=1e-14, method="bvls")
    return float(np.linalg.norm(A @ sol.x + gx) + max(-slack, 0.0))


def solve_region_point(
    R: float,
    c: Constellation,
    ch: AwgnChannel,
    e: EnergyParams,
    init=None,
    *,
    max_rate: float | None = None,
    maxiter: int = 500,
    ftol: float = 1e-15,
    restarts: int = 20,
) -> RegionPoint:
    """Locally maximise ``z_DC`` over the symbol p.m.f. subject to ``I(X;Y) >= R``.

    Solved with sequential quadratic programming (SLSQP) using the analytic
    gradients of ``xi`` and of the output entropy.  ``converged`` requires the
    rate bound to hold within ``RATE_TOL`` and a KKT residual below ``KKT_TOL``.
    """
    M = c.M
    p0 = vertex_pmf(M, 1) if init is None else validate_pmf(init, M)
    if R < 0 or R > math.log2(M):
        raise ValueError(f"rate bound must lie in [0, log2 M], got {R!r}")
    grid = output_grid(c, ch)
    if max_rate is None:
        max_rate, _ = max_mutual_information(c, ch)
    if R > max_rate + RATE_TOL:
        I0 = max(grid.mutual_information(p0), 0.0)
        return RegionPoint(R, _zdc(xi_unchecked(p0, c), e), xi_unchecked(p0, c), p0, I0, False, np.inf,
                           f"infeasible: R={R:.6g} exceeds maximum rate {max_rate:.6g}")

    if R >= max_rate - RATE_TOL:
        return _max_rate_point(R, c, ch, e, grid)

    cons = [
        {"type": "eq", "fun": lambda q: q.sum() - 1.0, "jac": lambda q: np.ones(M)},
        {"type": "ineq", "fun": lambda q: grid.mutual_information(q) - R, "jac": grid.entropy_grad},
    ]
    # Near a face of the simplex I(p) behaves like -eps*log(eps), which spoils
    # the quasi-Newton model; restarting from the last iterate resets it.
    p, nit, best = p0, 0, None
    for _ in range(restarts + 1):
        res = optimize.minimize(
            lambda q: -xi_unchecked(q, c),
            p,
            jac=lambda q: -grad_xi(q, c),
            method="SLSQP",
            bounds=[(0.0, 1.0)] * M,
            constraints=cons,
            options={"ftol": ftol, "maxiter": maxiter},
        )
        nit += int(res.nit)
        p = project_to_simplex(res.x)
        p[p < 1e-15] = 0.0
        p /= p.sum()
        rate = max(grid.mutual_information(p), 0.0)
        kkt = kkt_residual(p, R, c, grid)
        feasible = rate >= R - RATE_TOL
        if best is None or (feasible, -kkt) > (best[1] >= R - RATE_TOL, -best[2]):
            best = (p, rate, kkt, res.message)
        if feasible and kkt < KKT_TOL:
            break
    p, rate, kkt, message = best
    x = xi_unchecked(p, c)
    converged = bool(rate >= R - RATE_TOL and kkt < KKT_TOL)
    msg = message if converged else f"{message}; rate slack {rate - R:.2e}, kkt {kkt:.2e}"
    return RegionPoint(R, _zdc(x, e), x, p, rate, converged, kkt, msg, nit)


def _max_rate_point(R, c, ch, e, grid) -> RegionPoint:
    # The feasible set shrinks to the (unique) rate maximiser, where no
    # constraint qualification holds; stationarity is checked for I alone.
    rate, p = max_mutual_information(c, ch)
    x = xi_unchecked(p, c)
    gi = grid.entropy_grad(p)
    free = p > _FREE
    lam = gi[free].mean()
    resid = float(np.linalg.norm(gi[free] - lam) + np.linalg.norm(np.maximum(gi[~free] - lam, 0.0)))
    converged = bool(rate >= R - RATE_TOL and resid < KKT_TOL)
    return RegionPoint(R, _zdc(x, e), x, p, rate, converged, resid, "maximum-rate endpoint")


def sweep_region(
    rate_grid,
    c: Constellation,
    ch: AwgnChannel,
    e: EnergyParams,
    init=None,
    **kw,
) -> list[RegionPoint]:
    """Trace the boundary along an ascending rate grid with warm starts.

    The first point starts from the vertex ``[0, 1, 0, ...]``; each later point
    starts from its predecessor's solution.
    """
    rates = np.asarray(rate_grid, dtype=float)
    if np.any(np.diff(rates) < 0):
        raise ValueError("rate grid must be ascending")
    max_rate, _ = max_mutual_information(c, ch)
    current = vertex_pmf(c.M, 1) if init is None else validate_pmf(init, c.M)
    out = []
    for R in rates:
        pt = solve_region_point(float(R), c, ch, e, current, max_rate=max_rate, **kw)
        out.append(pt)
        if pt.converged:
            current = pt.pmf
    return out


def rate_grid(c: Constellation, ch: AwgnChannel, steps: int, top: float = 1.0) -> np.ndarray:
    """``steps`` rates from 0 to ``top`` times the maximum achievable rate."""
    max_rate, _ = max_mutual_information(c, ch)
    return np.linspace(0.0, top * max_rate, steps)


# --------------------------------------------------------------------------
# exhaustive search


def simplex_lattice(M: int, step: float, cap: int = 2_000_000) -> np.ndarray:
    """All p.m.f.s with entries in multiples of ``step`` (stars and bars)."""
    n = round(1.0 / step)
    if not math.isclose(n * step, 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError("step must divide 1")
    count = math.comb(n + M - 1, M - 1)
    if count > cap:
        raise ValueError(f"lattice has {count} points, cap is {cap}")
    bars = np.array(list(itertools.combinations(range(n + M - 1), M - 1)), dtype=int).reshape(-1, M - 1)
    edges = np.column_stack([np.full(len(bars), -1), bars, np.full(len(bars), n + M - 1)])
    return (np.diff(edges, axis=1) - 1) / n


def xi_many(P: np.ndarray, c: Constellation) -> np.ndarray:
    """``xi`` for each row of ``P`` via the batched four-fold convolution."""
    K, M = P.shape
    a = np.zeros((K, 2 * M - 1))
    for i in range(M):
        a[:, i : i + M] += P[:, i : i + 1] * P
    b = a[:, ::-1]
    pbar = np.zeros((K, 4 * M - 3))
    for i in range(2 * M - 1):
        pbar[:, i : i + 2 * M - 1] += a[:, i : i + 1] * b
    return pbar @ np.cos(theta_support(c))


@dataclass
class EsmTable:
    """Lattice p.m.f.s with their ``xi`` and rate, reusable across rate bounds."""

    constellation: Constellation
    lattice: np.ndarray
    xi: np.ndarray
    rate: np.ndarray
    step: float
    order: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        # best xi first; ties resolved by lexicographically largest p.m.f.
        keys = [-self.lattice[:, m] for m in range(self.lattice.shape[1] - 1, -1, -1)]
        self.order = np.lexsort(keys + [-np.round(self.xi, 12)])

    def best(self, R: float, e: EnergyParams) -> RegionPoint:
        feasible = self.rate[self.order] >= R
        if not feasible.any():
            nan = float("nan")
            return RegionPoint(R, nan, nan, np.full(self.lattice.shape[1], nan), nan, False, nan, "no feasible lattice point")
        i = self.order[np.argmax(feasible)]
        p = self.lattice[i]
        return RegionPoint(R, _zdc(self.xi[i], e), float(self.xi[i]), p.copy(), float(self.rate[i]), True, float("nan"), "lattice optimum")


def esm_table(c: Constellation, ch: AwgnChannel, step: float = 0.02, cap: int = 2_000_000) -> EsmTable:
    P = simplex_lattice(c.M, step, cap)
    grid = output_grid(c, ch)
    rate = np.clip(grid.entropy_many(P) - LOG2_PI_E, 0.0, None)
    return EsmTable(c, P, xi_many(P, c), rate, step)


def esm_oracle(R: float, c: Constellation, ch: AwgnChannel, e: EnergyParams, step: float = 0.02, cap: int = 2_000_000) -> RegionPoint:
    """Globally best lattice p.m.f. (by ``xi``) meeting the rate bound."""
    return esm_table(c, ch, step, cap).best(R, e)
