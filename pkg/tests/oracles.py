"""Independent reference computations used only by the tests."""

import itertools

import numpy as np


def xi_quadruples(p, phases):
    """E{cos(phi0 + phi1 - phi2 - phi3)} by enumerating all M^4 index quadruples."""
    p = np.asarray(p, dtype=float)
    total = 0.0
    for a, b, c, d in itertools.product(range(len(p)), repeat=4):
        w = p[a] * p[b] * p[c] * p[d]
        if w:
            total += w * np.cos(phases[a] + phases[b] - phases[c] - phases[d])
    return total


def theta_pmf_quadruples(p, phases, support):
    """Accumulate quadruple probabilities into the nearest support bin."""
    p = np.asarray(p, dtype=float)
    out = np.zeros(len(support))
    for a, b, c, d in itertools.product(range(len(p)), repeat=4):
        t = phases[a] + phases[b] - phases[c] - phases[d]
        k = int(np.argmin(np.abs(support - t)))
        assert abs(support[k] - t) < 1e-9
        out[k] += p[a] * p[b] * p[c] * p[d]
    return out


def theta_pmf_closed_form_m4(p):
    """Closed-form polynomials of the 13-point p.m.f. for M = 4."""
    p0, p1, p2, p3 = p
    t = [
        p0 * p3,
        p0 * p2 + p1 * p3,
        p0 * p1 + p1 * p2 + p2 * p3,
        p0**2 + p1**2 + p2**2 + p3**2,
        p0 * p1 + p1 * p2 + p2 * p3,
        p0 * p2 + p1 * p3,
        p0 * p3,
    ]
    t0, t1, t2, t3, t4, t5, t6 = t
    return np.array([
        t0**2,
        2 * t0 * t1,
        2 * t0 * t2 + t1**2,
        2 * (t0 * t3 + t1 * t2),
        2 * t0 * t4 + 2 * t1 * t3 + t2**2,
        2 * (t0 * t5 + t1 * t4 + t2 * t3),
        2 * t0 * t6 + 2 * t1 * t5 + 2 * t2 * t4 + t3**2,
        2 * (t1 * t6 + t2 * t5 + t3 * t4),
        2 * t2 * t6 + 2 * t3 * t5 + t4**2,
        2 * (t3 * t6 + t4 * t5),
        2 * t4 * t6 + t5**2,
        2 * t5 * t6,
        t6**2,
    ])


def xi_moment(p, phases):
    """|E e^{j phi}|^4, algebraically equal to xi."""
    return abs(np.dot(p, np.exp(1j * np.asarray(phases)))) ** 4


def central_diff(f, x, h):
    x = np.asarray(x, dtype=float)
    return np.array([(f(x + h * e) - f(x - h * e)) / (2 * h) for e in np.eye(x.size)])


def rel_err(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / np.max(np.abs(b)))
