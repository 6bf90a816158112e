"""Tests of reflective symmetry against k-sine-skewed alternatives.

Five statistics are provided, all asymptotically standard normal under the
null and used two-sided:

``ParamKnownMu``
    score statistic for skewness about a specified centre, standardised by
    the skewness information of the assumed base density.
``ParamUnknownMu``
    efficient score for skewness with the location score projected out,
    evaluated at the sample mean direction (assumed base density).
``SemiparKnownMu``
    studentised score about a specified centre; with ``k=2`` this is the
    b2* test.
``SemiparUnknownMu``
    efficient score with the projection coefficient estimated from the
    data, studentised; valid under any symmetric base density.
``B2Bar``
    omnibus test based on the second centred sine moment about the sample
    mean direction.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.special import ndtr, ndtri

from .distributions import (
    base_pdf,
    cross_information,
    fisher_block,
    score_derivative,
    score_location,
)
from .estimators import mean_direction, mean_resultant_length
from .special import integrate_periodic, normalize_angle

PARAM_KNOWN_MU = "ParamKnownMu"
PARAM_UNKNOWN_MU = "ParamUnknownMu"
SEMIPAR_KNOWN_MU = "SemiparKnownMu"
SEMIPAR_UNKNOWN_MU = "SemiparUnknownMu"
B2BAR = "B2Bar"
TEST_IDS = (PARAM_KNOWN_MU, PARAM_UNKNOWN_MU, SEMIPAR_KNOWN_MU, SEMIPAR_UNKNOWN_MU, B2BAR)

NEEDS_FAMILY = {PARAM_KNOWN_MU, PARAM_UNKNOWN_MU, SEMIPAR_UNKNOWN_MU}
NEEDS_MU = {PARAM_KNOWN_MU, SEMIPAR_KNOWN_MU}

_TEST_ALIASES = {
    "paramknownmu": PARAM_KNOWN_MU,
    "param-known": PARAM_KNOWN_MU,
    "paramunknownmu": PARAM_UNKNOWN_MU,
    "param-unknown": PARAM_UNKNOWN_MU,
    "semiparknownmu": SEMIPAR_KNOWN_MU,
    "semi-known": SEMIPAR_KNOWN_MU,
    "b2star": SEMIPAR_KNOWN_MU,
    "semiparunknownmu": SEMIPAR_UNKNOWN_MU,
    "semi-unknown": SEMIPAR_UNKNOWN_MU,
    "b2bar": B2BAR,
}

TRIVIAL = "TrivialTest"
DEGENERATE = "DegenerateVariance"

DEFAULT_ALPHAS = (0.01, 0.05, 0.10)
MIN_N = 5
_VAR_FLOOR = 1e-14


class TrivialTestError(ValueError):
    """The requested test reduces to the trivial (data-free) test."""


def canonical_test_id(name):
    key = str(name).strip().lower()
    if key in _TEST_ALIASES:
        return _TEST_ALIASES[key]
    raise ValueError(f"unknown test {name!r}; expected one of {TEST_IDS}")


@dataclass
class TestReport:
    test: str
    k: int
    n: int
    mu_used: float
    statistic: float
    p_value: float
    reject_at: dict = field(default_factory=dict)
    flags: tuple = ()
    family: dict = None
    extra: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    @property
    def trivial(self):
        return TRIVIAL in self.flags

    def rejects(self, alpha):
        return bool(np.isfinite(self.p_value) and self.p_value < alpha)

    def to_dict(self):
        def clean(x):
            return None if x is None or not math.isfinite(x) else float(x)

        out = {
            "test": self.test,
            "k": self.k,
            "n": self.n,
            "mu_used": clean(self.mu_used),
            "statistic": clean(self.statistic),
            "p_value": clean(self.p_value),
            "reject_at": {f"{a:g}": r for a, r in self.reject_at.items()},
            "flags": list(self.flags),
        }
        if self.family is not None:
            out["family"] = self.family
        out.update(self.extra)
        return out


@dataclass(frozen=True)
class EfficiencyWeights:
    eta_hat: float
    gamma12_hat: float
    gamma11_hat: float


def two_sided_p(z):
    return float(2.0 * ndtr(-abs(z)))


def _report(test, k, angles, mu, stat, flags=(), family=None, alphas=DEFAULT_ALPHAS):
    if flags:
        stat, p = math.nan, math.nan
        reject = {}
    else:
        p = two_sided_p(stat)
        reject = {a: p < a for a in alphas}
    return TestReport(
        test=test,
        k=int(k),
        n=int(np.size(angles)),
        mu_used=float(mu),
        statistic=float(stat),
        p_value=p,
        reject_at=reject,
        flags=tuple(sorted(flags)),
        family=None if family is None else family.to_dict(),
    )


def _check(angles, k):
    a = np.asarray(angles, dtype=float)
    if a.ndim != 1 or a.size < MIN_N:
        raise ValueError(f"tests need at least {MIN_N} angles, got {a.size}")
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return a, int(k)


def is_trivial(family, k):
    """Von Mises with k=1 has a singular information matrix."""
    return family is not None and family.kind == "vm" and int(k) == 1


@lru_cache(maxsize=256)
def _block(family, k):
    return fisher_block(family, k)


def parametric_test_unknown_mu(angles, family, k, alphas=DEFAULT_ALPHAS):
    a, k = _check(angles, k)
    mu = mean_direction(a)
    if is_trivial(family, k):
        return _report(PARAM_UNKNOWN_MU, k, a, mu, math.nan, {TRIVIAL}, family, alphas)
    fb = _block(family, k)
    d = a - mu
    resid = np.sin(k * d) - (fb.gamma12 / fb.gamma11) * score_location(family, d)
    stat = resid.sum() / math.sqrt(a.size * fb.gamma22_1)
    return _report(PARAM_UNKNOWN_MU, k, a, mu, stat, (), family, alphas)


def parametric_test_known_mu(angles, family, k, mu, alphas=DEFAULT_ALPHAS):
    a, k = _check(angles, k)
    mu = normalize_angle(mu)
    fb = _block(family, k)
    stat = np.sin(k * (a - mu)).sum() / math.sqrt(a.size * fb.gamma22)
    return _report(PARAM_KNOWN_MU, k, a, mu, stat, (), family, alphas)


def efficiency_weights(angles, posited, k, mu):
    """Plug-in projection coefficient of the semi-parametric efficient score.

    ``gamma12_hat = mean(k cos(k d))`` and ``gamma11_hat = mean(phi'(d))``
    with ``d = theta - mu``.
    """
    d = np.asarray(angles, dtype=float) - mu
    g12 = float(np.mean(k * np.cos(k * d)))
    g11 = float(np.mean(score_derivative(posited, d)))
    eta = g12 / g11 if g11 != 0.0 else math.inf
    return EfficiencyWeights(eta_hat=eta, gamma12_hat=g12, gamma11_hat=g11)


def _studentised(resid):
    n = resid.size
    var = float(np.mean(resid * resid))
    if var < _VAR_FLOOR:
        return math.nan, False
    return resid.sum() / math.sqrt(n * var), True


def semiparametric_test_unknown_mu(angles, posited, k, alphas=DEFAULT_ALPHAS):
    a, k = _check(angles, k)
    mu = mean_direction(a)
    if is_trivial(posited, k):
        return _report(SEMIPAR_UNKNOWN_MU, k, a, mu, math.nan, {TRIVIAL}, posited, alphas)
    d = a - mu
    dphi = score_derivative(posited, d)
    g11 = float(np.mean(dphi))
    if abs(g11) <= 1e-10 * max(float(np.mean(np.abs(dphi))), 1e-300):
        return _report(SEMIPAR_UNKNOWN_MU, k, a, mu, math.nan, {DEGENERATE}, posited, alphas)
    eta = float(np.mean(k * np.cos(k * d))) / g11
    resid = np.sin(k * d) - eta * score_location(posited, d)
    stat, ok = _studentised(resid)
    flags = () if ok else {DEGENERATE}
    return _report(SEMIPAR_UNKNOWN_MU, k, a, mu, stat, flags, posited, alphas)


def semiparametric_test_known_mu(angles, k, mu, alphas=DEFAULT_ALPHAS):
    a, k = _check(angles, k)
    mu = normalize_angle(mu)
    stat, ok = _studentised(np.sin(k * (a - mu)))
    flags = () if ok else {DEGENERATE}
    return _report(SEMIPAR_KNOWN_MU, k, a, mu, stat, flags, None, alphas)


def b2bar_variance(angles, mu=None):
    """Consistent null variance of ``sqrt(n) * b2bar``.

    ``(1 - a4)/2 - 2 a2 + (2 a2 / R)(a3 + a2 (1 - a2) / R)`` with ``a_p``
    the sample cosine moments about the mean direction and ``R`` the mean
    resultant length.  Accounts for estimating the centre.
    """
    a = np.asarray(angles, dtype=float)
    if mu is None:
        mu = mean_direction(a)
    d = a - mu
    r = mean_resultant_length(a)
    a2, a3, a4 = (float(np.mean(np.cos(p * d))) for p in (2, 3, 4))
    return (1.0 - a4) / 2.0 - 2.0 * a2 + (2.0 * a2 / r) * (a3 + a2 * (1.0 - a2) / r)


def b2bar_test(angles, alphas=DEFAULT_ALPHAS):
    a, _ = _check(angles, 2)
    mu = mean_direction(a)
    var = b2bar_variance(a, mu)
    if var < _VAR_FLOOR:
        return _report(B2BAR, 2, a, mu, math.nan, {DEGENERATE}, None, alphas)
    stat = np.sin(2.0 * (a - mu)).sum() / math.sqrt(a.size * var)
    return _report(B2BAR, 2, a, mu, stat, (), None, alphas)


def run_test(test, angles, family=None, k=2, mu=None, alphas=DEFAULT_ALPHAS):
    """Dispatch on a test identifier."""
    test = canonical_test_id(test)
    if test in NEEDS_FAMILY and family is None:
        raise ValueError(f"{test} needs an assumed or posited base family")
    if test in NEEDS_MU and mu is None:
        raise ValueError(f"{test} needs a specified centre mu")
    if test == PARAM_UNKNOWN_MU:
        return parametric_test_unknown_mu(angles, family, k, alphas)
    if test == PARAM_KNOWN_MU:
        return parametric_test_known_mu(angles, family, k, mu, alphas)
    if test == SEMIPAR_UNKNOWN_MU:
        return semiparametric_test_unknown_mu(angles, family, k, alphas)
    if test == SEMIPAR_KNOWN_MU:
        return semiparametric_test_known_mu(angles, k, mu, alphas)
    return b2bar_test(angles, alphas)


def local_power_integrals(posited, truth, k, k_prime, nodes=4096):
    """``(V, C, eta)`` for the semi-parametric test under local alternatives.

    ``eta = k E[cos(k Theta)] / E[phi'_posited(Theta)]`` under ``truth``;
    ``V`` is the null variance of the efficient score and ``C`` its
    covariance with the k'-sine skewness score.
    """
    g12 = k * integrate_periodic(lambda t: np.cos(k * t) * base_pdf(truth, t), nodes)
    g11 = cross_information(posited, truth, nodes)
    eta = g12 / g11

    def resid(t):
        return np.sin(k * t) - eta * score_location(posited, t)

    v = integrate_periodic(lambda t: resid(t) ** 2 * base_pdf(truth, t), nodes)
    c = integrate_periodic(
        lambda t: resid(t) * np.sin(k_prime * t) * base_pdf(truth, t), nodes
    )
    return v, c, eta


def asymptotic_local_power(posited, truth, k, k_prime, tau2, alpha=0.05, nodes=4096):
    """Limiting rejection probability under skewness ``tau2 / sqrt(n)``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    v, c, _ = local_power_integrals(posited, truth, k, k_prime, nodes)
    if v <= 1e-12:
        raise ValueError(
            "efficient score has zero variance (von Mises posited with k=1)"
        )
    shift = c * tau2 / math.sqrt(v)
    z = float(ndtri(1.0 - alpha / 2.0))
    return float(1.0 - ndtr(z - shift) + ndtr(-z - shift))
