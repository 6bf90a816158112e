"""Symmetric base densities, k-sine-skewed densities, location scores and
Fisher information blocks.

Families are identified by the short names used on the command line and in
config files: ``vm`` (von Mises, concentration kappa > 0), ``cardioid``
(0 < rho < 1/2), ``wc`` (wrapped Cauchy, 0 < rho < 1) and ``wn`` (wrapped
normal, 0 < rho < 1).
"""

from dataclasses import dataclass
import math

import numpy as np

from .special import bessel_i, bessel_ratio, integrate_periodic, normalize_angle

FAMILIES = ("vm", "cardioid", "wc", "wn")

_ALIASES = {
    "vm": "vm",
    "vonmises": "vm",
    "von_mises": "vm",
    "cardioid": "cardioid",
    "c": "cardioid",
    "wc": "wc",
    "wrappedcauchy": "wc",
    "wrapped_cauchy": "wc",
    "wn": "wn",
    "wrappednormal": "wn",
    "wrapped_normal": "wn",
}

INV_TWO_PI = 1.0 / (2.0 * np.pi)
_WN_TAIL = 1e-16
_WN_GAUSS_SIGMA2 = 4.0
QUADRATURE_NODES = 4096


class InvalidParameterError(ValueError):
    pass


@dataclass(frozen=True)
class BaseFamily:
    """A reflectively symmetric unimodal density centred at zero."""

    kind: str
    concentration: float

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise InvalidParameterError(
                f"unknown family {self.kind!r}; expected one of {FAMILIES}"
            )
        object.__setattr__(self, "kind", kind)
        c = float(self.concentration)
        object.__setattr__(self, "concentration", c)
        if not math.isfinite(c):
            raise InvalidParameterError("concentration must be finite")
        if kind == "vm":
            ok = c > 0
        elif kind == "cardioid":
            ok = 0 < c < 0.5
        else:
            ok = 0 < c < 1
        if not ok:
            raise InvalidParameterError(
                f"concentration {c} outside the open range for {kind}"
            )

    def to_dict(self):
        return {"family": self.kind, "concentration": self.concentration}

    @classmethod
    def from_dict(cls, d):
        return cls(d["family"], d["concentration"])

    def __str__(self):
        return f"{self.kind}({self.concentration:g})"


@dataclass(frozen=True)
class SineSkewedModel:
    """``f0(theta - mu) * (1 + lam * sin(k (theta - mu)))``."""

    base: BaseFamily
    mu: float = 0.0
    lam: float = 0.0
    k: int = 1

    def __post_init__(self):
        if not -1.0 <= self.lam <= 1.0:
            raise InvalidParameterError(f"lambda must lie in [-1, 1], got {self.lam}")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidParameterError(f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "mu", normalize_angle(self.mu))


@dataclass(frozen=True)
class FisherBlock:
    gamma11: float
    gamma12: float
    gamma22: float
    gamma22_1: float

    def to_dict(self):
        return {
            "gamma11": self.gamma11,
            "gamma12": self.gamma12,
            "gamma22": self.gamma22,
            "gamma22_1": self.gamma22_1,
        }


def _wn_powers(rho):
    """Coefficients ``rho**(p**2)`` for p = 1, 2, ... until below 1e-16."""
    p = np.arange(1, 64)
    coef = rho ** (p.astype(float) ** 2)
    keep = coef >= _WN_TAIL
    # always keep at least the first term
    keep[0] = True
    return p[keep], coef[keep]


def _wn_parts(rho, theta):
    """Density, location score and its derivative for the wrapped normal.

    Concentrated cases (sigma <= 2) sum the wrapped Gaussian terms with
    weights taken relative to the largest one, which keeps the score
    accurate far in the tails; diffuse cases use the cosine series.
    """
    theta = np.asarray(theta, dtype=float)
    sigma2 = -2.0 * math.log(rho)
    if sigma2 <= _WN_GAUSS_SIGMA2:
        sigma = math.sqrt(sigma2)
        j = np.arange(-int(40.0 * sigma / (2 * np.pi)) - 2, int(40.0 * sigma / (2 * np.pi)) + 3)
        x = np.add.outer(normalize_angle(theta), 2 * np.pi * j)
        e = -0.5 * x * x / sigma2
        top = e.max(axis=-1, keepdims=True)
        w = np.exp(e - top)
        sw = w.sum(axis=-1)
        f = np.exp(top[..., 0]) * sw / (sigma * math.sqrt(2 * np.pi))
        m1 = (x * w).sum(axis=-1) / sw
        m2 = (x * x * w).sum(axis=-1) / sw
        phi = m1 / sigma2
        dphi = 1.0 / sigma2 - m2 / (sigma2 * sigma2) + phi * phi
        return f, phi, dphi
    p, coef = _wn_powers(rho)
    ang = np.multiply.outer(theta, p)
    c = np.cos(ang)
    f = 1.0 + 2.0 * (c @ coef)
    df = -2.0 * (np.sin(ang) @ (p * coef))
    d2f = -2.0 * (c @ (p * p * coef))
    phi = -df / f
    return INV_TWO_PI * f, phi, -d2f / f + phi * phi


def trig_moment(family, p):
    """``E[cos(p Theta)]`` under the base density (the p-th cosine moment)."""
    p = int(p)
    if p == 0:
        return 1.0
    c = family.concentration
    if family.kind == "vm":
        return float(bessel_ratio(p, c))
    if family.kind == "cardioid":
        return c if p == 1 else 0.0
    if family.kind == "wc":
        return c**p
    return c ** (p * p)


def base_pdf(family, theta):
    theta = np.asarray(theta, dtype=float)
    c = family.concentration
    if family.kind == "vm":
        return np.exp(c * np.cos(theta)) * INV_TWO_PI / bessel_i(0, c)
    if family.kind == "cardioid":
        return INV_TWO_PI * (1.0 + 2.0 * c * np.cos(theta))
    if family.kind == "wc":
        return INV_TWO_PI * (1.0 - c * c) / (1.0 + c * c - 2.0 * c * np.cos(theta))
    return _wn_parts(c, theta)[0]


def sine_skewed_pdf(model, theta):
    d = np.asarray(theta, dtype=float) - model.mu
    return base_pdf(model.base, d) * (1.0 + model.lam * np.sin(model.k * d))


def score_location(family, theta):
    """Location score ``phi = -f0'/f0``."""
    theta = np.asarray(theta, dtype=float)
    c = family.concentration
    if family.kind == "vm":
        return c * np.sin(theta)
    if family.kind == "cardioid":
        return 2.0 * c * np.sin(theta) / (1.0 + 2.0 * c * np.cos(theta))
    if family.kind == "wc":
        return 2.0 * c * np.sin(theta) / (1.0 + c * c - 2.0 * c * np.cos(theta))
    return _wn_parts(c, theta)[1]


def score_derivative(family, theta):
    """Derivative of the location score with respect to theta."""
    theta = np.asarray(theta, dtype=float)
    c = family.concentration
    if family.kind == "vm":
        return c * np.cos(theta)
    if family.kind == "cardioid":
        cos = np.cos(theta)
        return 2.0 * c * (2.0 * c + cos) / (1.0 + 2.0 * c * cos) ** 2
    if family.kind == "wc":
        cos = np.cos(theta)
        return (
            2.0 * c * (-2.0 * c + (1.0 + c * c) * cos)
            / (1.0 + c * c - 2.0 * c * cos) ** 2
        )
    return _wn_parts(c, theta)[2]


def fisher_block(family, k):
    """Fisher information entries for location and k-sine skewness.

    Closed forms for von Mises, cardioid and wrapped Cauchy.  For the
    wrapped normal the cross and skewness entries follow from the cosine
    moments ``rho**(p**2)`` and the location information is integrated
    numerically.
    """
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k}")
    k = int(k)
    c = family.concentration
    if family.kind == "vm":
        a1 = float(bessel_ratio(1, c))
        g11 = c * a1
        g12 = k * float(bessel_ratio(k, c))
        g22 = (1.0 - float(bessel_ratio(2 * k, c))) / 2.0
        if k == 1:
            # A_2 = 1 - 2 A_1 / kappa makes the block exactly singular
            return FisherBlock(g11, g12, g22, 0.0)
    elif family.kind == "cardioid":
        g11 = 1.0 - math.sqrt(1.0 - 4.0 * c * c)
        g12 = c if k == 1 else 0.0
        g22 = 0.5
    elif family.kind == "wc":
        g11 = 2.0 * c * c / (1.0 - c * c) ** 2
        g12 = k * c**k
        g22 = (1.0 - c * c) * sum(c ** (2 * (l - 1)) for l in range(1, k + 1)) / 2.0
    else:
        g11 = integrate_periodic(
            lambda t: score_location(family, t) ** 2 * base_pdf(family, t),
            QUADRATURE_NODES,
        )
        g12 = k * trig_moment(family, k)
        g22 = (1.0 - trig_moment(family, 2 * k)) / 2.0
    g22_1 = max(g22 - g12 * g12 / g11, 0.0)
    return FisherBlock(g11, g12, g22, g22_1)


def cross_information(posited, truth, nodes=QUADRATURE_NODES):
    """``E_truth[phi'_posited(Theta)]``, the location cross-information."""
    return integrate_periodic(
        lambda t: score_derivative(posited, t) * base_pdf(truth, t), nodes
    )

