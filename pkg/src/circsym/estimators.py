"""Mean direction, mean resultant length and centred trigonometric moments."""

from dataclasses import asdict, dataclass
import math

import numpy as np

from .special import normalize_angle


class ZeroResultantError(ValueError):
    """The sample resultant vanishes, so the mean direction is undefined."""


def as_sample(angles):
    """Validate and wrap a sequence of angles into a float array."""
    a = np.atleast_1d(np.asarray(angles, dtype=float))
    if a.ndim != 1 or a.size < 1:
        raise ValueError("a sample is a non-empty one-dimensional list of angles")
    return normalize_angle(a)


def mean_direction(angles):
    a = np.asarray(angles, dtype=float)
    s, c = np.sin(a).sum(), np.cos(a).sum()
    if math.hypot(s, c) < 1e-12 * a.size:
        raise ZeroResultantError("resultant length is zero; mean direction undefined")
    return normalize_angle(math.atan2(s, c))


def mean_resultant_length(angles):
    a = np.asarray(angles, dtype=float)
    return min(math.hypot(np.sin(a).sum(), np.cos(a).sum()) / a.size, 1.0)


@dataclass(frozen=True)
class CircularSummary:
    n: int
    mean_direction: float
    mean_resultant_length: float
    a2bar: float
    b2bar: float
    skewness: float
    degenerate: bool
    n_distinct: int

    def to_dict(self):
        d = asdict(self)
        if math.isnan(d["skewness"]):
            d["skewness"] = None
        return d


def central_moments(angles, mu, p):
    """``(mean cos(p(theta - mu)), mean sin(p(theta - mu)))``."""
    d = np.asarray(angles, dtype=float) - mu
    return float(np.mean(np.cos(p * d))), float(np.mean(np.sin(p * d)))


def circular_summary(angles):
    """Sample summary used for descriptive reporting.

    Skewness is ``b2bar / (1 - Rbar)**1.5`` and is NaN (with ``degenerate``
    set) when all mass sits on one direction.
    """
    a = np.asarray(angles, dtype=float)
    mu = mean_direction(a)
    rbar = mean_resultant_length(a)
    a2, b2 = central_moments(a, mu, 2)
    degenerate = 1.0 - rbar <= 1e-14
    skew = math.nan if degenerate else b2 / (1.0 - rbar) ** 1.5
    return CircularSummary(
        n=int(a.size),
        mean_direction=mu,
        mean_resultant_length=rbar,
        a2bar=a2,
        b2bar=b2,
        skewness=skew,
        degenerate=bool(degenerate),
        n_distinct=int(np.unique(a).size),
    )
