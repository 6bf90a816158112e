"""Parametric bootstrap p-values with data-fitted concentration.

The centre is estimated by the sample mean direction and the concentration
of the chosen family by moments of the mean resultant length (inverting
``A_1`` for the von Mises, truncating at 0.4999 for the cardioid).  Each
bootstrap replicate is drawn from the fitted symmetric model and the
statistic is recomputed exactly as for the data.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .distributions import BaseFamily
from .estimators import mean_direction, mean_resultant_length
from .sampling import derive_seed, sample_base
from .special import invert_a1, normalize_angle
from .symtests import (
    DEFAULT_ALPHAS,
    NEEDS_MU,
    TRIVIAL,
    TrivialTestError,
    canonical_test_id,
    is_trivial,
    run_test,
)

CARDIOID_CAP = 0.4999
# Largest mean resultant length accepted for WC / WN fits.
RHO_CAP = 0.999
MIN_N = 10


class FitError(ValueError):
    """Concentration cannot be fitted from the sample."""


@dataclass(frozen=True)
class BootstrapConfig:
    family: str
    test: str
    k: int = 1
    B: int = 1000
    seed: int = 0
    mu: float = None
    refit: bool = True
    alphas: tuple = DEFAULT_ALPHAS

    def __post_init__(self):
        object.__setattr__(self, "test", canonical_test_id(self.test))
        object.__setattr__(self, "family", BaseFamily(self.family, 0.25).kind)
        if self.B < 99:
            raise ValueError("B must be at least 99")
        if self.test in NEEDS_MU and self.mu is None:
            raise ValueError(f"{self.test} needs a specified centre mu")


def fit_concentration(kind, rbar):
    """Moment fit of the concentration from the mean resultant length."""
    if kind == "vm":
        if rbar >= 0.999:
            raise FitError(f"Rbar={rbar:.6f} too close to 1 for a von Mises fit")
        if rbar <= 0.0:
            raise FitError("Rbar is zero; concentration undefined")
        return invert_a1(rbar)
    if rbar <= 0.0:
        raise FitError("Rbar is zero; concentration undefined")
    if kind == "cardioid":
        return min(rbar, CARDIOID_CAP)
    if rbar >= RHO_CAP:
        raise FitError(f"Rbar={rbar:.6f} too close to 1 for a {kind} fit")
    return rbar


def fit_family(kind, angles):
    return BaseFamily(kind, fit_concentration(kind, mean_resultant_length(angles)))


def _clamped_fit(kind, angles, fallback):
    r = mean_resultant_length(angles)
    r = min(max(r, 1e-6), 0.998)
    try:
        return BaseFamily(kind, fit_concentration(kind, r))
    except (FitError, ArithmeticError):
        return fallback


def _replicate_stats(sample_args):
    """Statistics for a contiguous block of bootstrap replicates."""
    angles_len, fitted, config, centre, start, stop = sample_args
    out = np.empty(stop - start)
    for j, b in enumerate(range(start, stop)):
        seed = derive_seed(config.seed, 1, b)
        x = normalize_angle(sample_base(fitted, angles_len, seed) + centre)
        fam = _clamped_fit(fitted.kind, x, fitted) if config.refit else fitted
        rep = run_test(config.test, x, fam, config.k, config.mu)
        out[j] = rep.statistic
    return out


def bootstrap_test(angles, config, workers=1):
    """Parametric-bootstrap version of a test.

    Returns the observed :class:`~circsym.symtests.TestReport` with its
    p-value replaced by ``(1 + #{|Q_b| >= |Q_obs|}) / (B + 1)``.  Replicates
    whose statistic is undefined count as exceedances.
    """
    a = np.asarray(angles, dtype=float)
    if a.size < MIN_N:
        raise ValueError(f"bootstrap needs at least {MIN_N} angles")
    if config.test in ("ParamUnknownMu", "SemiparUnknownMu") and is_trivial(
        BaseFamily(config.family, 0.25), config.k
    ):
        raise TrivialTestError("von Mises with k=1 reduces to the trivial test")
    mu_hat = mean_direction(a)
    fitted = fit_family(config.family, a)
    obs = run_test(config.test, a, fitted, config.k, config.mu)
    if TRIVIAL in obs.flags:
        raise TrivialTestError("selected test reduces to the trivial test")

    centre = config.mu if config.test in NEEDS_MU else mu_hat
    blocks = _blocks(config.B, workers)
    jobs = [(a.size, fitted, config, centre, lo, hi) for lo, hi in blocks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_replicate_stats, jobs))
    else:
        parts = [_replicate_stats(j) for j in jobs]
    stats = np.concatenate(parts)

    q_obs = abs(obs.statistic) if math.isfinite(obs.statistic) else math.inf
    with np.errstate(invalid="ignore"):
        exceed = ~(np.abs(stats) < q_obs)
    p = (1 + int(exceed.sum())) / (config.B + 1)
    obs.p_value = p
    obs.reject_at = {alpha: p < alpha for alpha in config.alphas}
    obs.extra = {
        "bootstrap": {
            "B": config.B,
            "seed": config.seed,
            "refit": config.refit,
            "fitted_family": fitted.to_dict(),
            "mean_direction": mu_hat,
            "n_undefined": int(np.isnan(stats).sum()),
        }
    }
    return obs


def _blocks(total, workers):
    nblocks = max(1, min(total, 4 * workers))
    edges = np.linspace(0, total, nblocks + 1).round().astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


__all__ = [
    "BootstrapConfig",
    "FitError",
    "bootstrap_test",
    "fit_concentration",
    "fit_family",
]
