"""Numerical primitives: modified Bessel functions, angle wrapping,
periodic quadrature and inversion of the first Bessel ratio."""

import math

import numpy as np

TWO_PI = 2.0 * np.pi
BESSEL_X_MAX = 700.0
_SERIES_RTOL = 1e-17
_SERIES_MAX_TERMS = 2000


def bessel_i(order, x):
    """Modified Bessel function of the first kind, integer order.

    Evaluated with the ascending series
    ``sum_m (x/2)**(order + 2m) / (m! (order + m)!)``, truncated once the
    next term no longer changes the partial sum.  Accepts scalars or arrays
    for ``x``.

    Parameters
    ----------
    order : int
        Non-negative integer order.
    x : float or array_like
        Non-negative argument, at most 700.

    Returns
    -------
    float or ndarray
    """
    if int(order) != order or order < 0:
        raise ValueError(f"order must be a non-negative integer, got {order!r}")
    order = int(order)
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa < 0):
        raise ValueError("x must be finite and non-negative")
    if np.any(xa > BESSEL_X_MAX):
        raise OverflowError(f"x above {BESSEL_X_MAX} overflows double precision")

    half = xa / 2.0
    quarter_sq = half * half
    term = half**order / math.factorial(order)
    total = term.copy() if isinstance(term, np.ndarray) else np.asarray(term)
    for m in range(1, _SERIES_MAX_TERMS):
        term = term * quarter_sq / (m * (m + order))
        total = total + term
        if np.all(term <= _SERIES_RTOL * total):
            break
    if total.ndim == 0:
        return float(total)
    return total


def bessel_ratio(order, kappa):
    """``A_order(kappa) = I_order(kappa) / I_0(kappa)``."""
    ka = np.asarray(kappa, dtype=float)
    if np.any(ka <= 0):
        raise ValueError("kappa must be positive")
    return bessel_i(order, kappa) / bessel_i(0, kappa)


def normalize_angle(theta):
    """Wrap angles to the half-open interval [-pi, pi).

    Works on scalars and arrays; pi maps to -pi.
    """
    t = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(t)):
        raise ValueError("angles must be finite")
    out = np.mod(t + np.pi, TWO_PI) - np.pi
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    out = np.where(out >= np.pi, out - TWO_PI, out)
    if out.ndim == 0:
        return float(out)
    return out


def integrate_periodic(f, nodes=4096):
    """Integrate a 2*pi-periodic function over one period.

    Composite trapezoid rule on equispaced nodes; spectrally accurate for
    smooth periodic integrands.  ``f`` is called once on the full node
    array and must be vectorized.
    """
    if nodes < 16:
        raise ValueError("nodes must be at least 16")
    theta = -np.pi + TWO_PI * np.arange(nodes) / nodes
    values = np.asarray(f(theta), dtype=float)
    if values.shape != theta.shape:
        values = np.broadcast_to(values, theta.shape)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("integrand returned non-finite values")
    return float(values.sum() * (TWO_PI / nodes))


def invert_a1(rbar, tol=1e-10):
    """Solve ``A_1(kappa) = rbar`` for kappa.

    Newton steps safeguarded by a bracket on [1e-8, 700]; a step leaving
    the bracket falls back to bisection.
    """
    if not 0.0 < rbar < 0.999:
        raise ValueError(f"rbar must lie in (0, 0.999), got {rbar!r}")
    lo, hi = 1e-8, BESSEL_X_MAX
    # Best-Fisher style starting value
    if rbar < 0.53:
        kappa = 2 * rbar + rbar**3 + 5 * rbar**5 / 6
    elif rbar < 0.85:
        kappa = -0.4 + 1.39 * rbar + 0.43 / (1 - rbar)
    else:
        kappa = 1 / (rbar**3 - 4 * rbar**2 + 3 * rbar)
    kappa = min(max(kappa, lo), hi)

    for _ in range(200):
        i0 = bessel_i(0, kappa)
        i1 = bessel_i(1, kappa)
        a1 = i1 / i0
        resid = a1 - rbar
        if abs(resid) <= tol * 1e-2:
            return kappa
        if resid > 0:
            hi = kappa
        else:
            lo = kappa
        # dA1/dkappa = 1 - A1/kappa - A1^2
        deriv = 1.0 - a1 / kappa - a1 * a1
        step_ok = deriv > 0
        if step_ok:
            cand = kappa - resid / deriv
            step_ok = lo < cand < hi
        kappa = cand if step_ok else 0.5 * (lo + hi)
        if hi - lo < 1e-15 * max(1.0, kappa):
            break
    if abs(bessel_ratio(1, kappa) - rbar) > tol:
        raise ArithmeticError(f"invert_a1 failed to converge for rbar={rbar!r}")
    return kappa
