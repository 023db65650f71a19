"""Model-degree selection.

Two ingredients: a moment-based lower bound for the degree (from the
grouped midpoint mean and variance), and a change-point scan over the
loglikelihood gains of consecutive degrees.  Because the models are
nested the gains are nonnegative; early gains are large and late gains
small, so the optimal degree is read off as the change point of the gain
sequence, treating the gains as exponentials with a mean shift.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .em import EmConfig, em_grouped, em_raw
from .errors import DegenerateDataError, SelectionError
from .likelihood import RawSample
from .model import GroupedSample, SimplexWeights, to_unit

__all__ = [
    "DegreeSelectionTrace",
    "lower_bound_degree",
    "change_point",
    "select_degree",
]

# zero loglik gains inside the change-point logs are floored here
GAIN_FLOOR = 1e-12

WARM_START_UNIFORM_SHARE = 0.01


@dataclass(frozen=True)
class DegreeSelectionTrace:
    """Everything the degree scan produced.

    degrees[i] pairs with logliks[i]; increments[i-1] = logliks[i] -
    logliks[i-1] for i >= 1; r_profile[tau-1] is the change-point
    likelihood ratio R(tau); m_hat = degrees[tau_hat].
    """

    degrees: np.ndarray
    logliks: np.ndarray
    increments: np.ndarray
    r_profile: np.ndarray
    tau_hat: int
    m_hat: int
    fits: list

    @property
    def best_fit(self):
        return self.fits[self.tau_hat]


def _moment_bound(mean, var):
    return max(1, math.ceil(mean * (1.0 - mean) / var - 3.0))


def lower_bound_degree(grouped, support):
    """Moment estimate of the smallest usable degree.

    Uses the cell-midpoint mean and variance on the unit scale:
    max{1, ceil(mu(1-mu)/sigma^2 - 3)}.  All mass in a single cell gives
    zero variance and is rejected as degenerate.
    """
    n = grouped.n
    if n < 2:
        raise ValueError("need a total count of at least 2")
    u = to_unit(grouped.breakpoints, support)
    mid = 0.5 * (u[:-1] + u[1:])
    counts = grouped.counts.astype(float)
    mu = float(counts @ mid) / n
    ss = float(counts @ (mid * mid)) - n * mu * mu
    var = ss / (n - 1)
    if var <= 0.0:
        raise DegenerateDataError("all mass in one cell: zero midpoint variance")
    return _moment_bound(mu, var)


def _raw_lower_bound(data):
    # raw-data analogue of lower_bound_degree, used only for default degrees
    u = data.unit_values()
    if u.size < 2:
        raise ValueError("need at least 2 observations")
    mu = float(u.mean())
    var = float(u.var(ddof=1))
    if var <= 0.0:
        raise DegenerateDataError("constant sample: zero variance")
    return _moment_bound(mu, var)


def change_point(logliks):
    """Change point of the gain sequence of a nondecreasing loglik profile.

    Returns (tau_hat, r_profile) where r_profile[tau-1] = R(tau) for
    tau = 1..k and tau_hat is the smallest maximizer.  Boundary
    conventions: the vanishing final term at tau = k is taken at its
    limit 0 (so R(k) = 0), and zero gains inside logs are floored at
    1e-12.
    """
    ll = np.asarray(logliks, dtype=float)
    if ll.ndim != 1 or ll.size < 3:
        raise ValueError("need at least three loglik values")
    k = ll.size - 1
    total = ll[-1] - ll[0]
    if total <= GAIN_FLOOR:
        raise SelectionError("flat loglik profile: no gain to split")
    r = np.zeros(k)
    lead = k * math.log(total / k)
    for tau in range(1, k):
        g1 = max(ll[tau] - ll[0], GAIN_FLOOR)
        g2 = max(ll[-1] - ll[tau], GAIN_FLOOR)
        r[tau - 1] = (
            lead - tau * math.log(g1 / tau) - (k - tau) * math.log(g2 / (k - tau))
        )
    # tau = k: the (k - tau) log(" 0/0 ") term is 0 in the limit
    r[k - 1] = 0.0
    tau_hat = int(np.argmax(r)) + 1
    return tau_hat, r


def default_degrees(bound):
    """Degree set used when the caller gives none: bound-5 .. bound+30."""
    lo = max(1, bound - 5)
    return np.arange(lo, bound + 31)


def select_degree(data, support=None, degrees=None, config=None, warm_start=True):
    """Fit the MBLE at every degree in a consecutive set and pick one.

    Parameters
    ----------
    data : GroupedSample or RawSample
        Grouped data need an explicit support; raw data carry their own.
    degrees : sequence of int, optional
        Consecutive degrees m_0..m_0+k with k >= 2.  Default is the
        moment lower bound minus 5 (floored at 1) through bound plus 30.
    config : EmConfig, optional
    warm_start : bool
        Start each fit from the degree-elevated previous solution mixed
        with 1% uniform (keeps strict positivity); the scan then runs
        sequentially.  With warm_start=False every fit starts from the
        config init independently.

    Returns
    -------
    DegreeSelectionTrace
    """
    config = config or EmConfig()
    if isinstance(data, RawSample):
        if support is None:
            support = data.support
        bound = _raw_lower_bound(data)

        def fit(m, cfg):
            return em_raw(data, m, cfg)

    elif isinstance(data, GroupedSample):
        if support is None:
            raise ValueError("grouped data need an explicit support")
        bound = lower_bound_degree(data, support)

        def fit(m, cfg):
            return em_grouped(data, support, m, cfg)

    else:
        raise TypeError(f"cannot select a degree for {type(data).__name__}")

    if degrees is None:
        degrees = default_degrees(bound)
    degrees = np.asarray(sorted(int(m) for m in degrees))
    if degrees.size < 3:
        raise ValueError("need at least three degrees (k >= 2)")
    if np.any(np.diff(degrees) != 1):
        raise ValueError("degrees must be consecutive integers")
    if degrees[0] < 0:
        raise ValueError("degrees must be nonnegative")
    if degrees[0] >= bound:
        warnings.warn(
            f"first degree {degrees[0]} is not below the estimated lower "
            f"bound {bound}; the change point may sit at the left edge",
            stacklevel=2,
        )

    fits = []
    prev = None
    for m in degrees:
        cfg = config
        if warm_start and prev is not None:
            lifted = prev.elevate(1).p
            mixed = (1.0 - WARM_START_UNIFORM_SHARE) * lifted
            mixed = mixed + WARM_START_UNIFORM_SHARE / (m + 1)
            cfg = replace(config, init=SimplexWeights(mixed))
        report = fit(int(m), cfg)
        fits.append(report)
        prev = report.weights

    logliks = np.asarray([f.loglik for f in fits])
    increments = np.diff(logliks)
    if increments.size and increments.min() < -1e-6:
        warnings.warn(
            "loglik decreased along the nested degree scan; the EM fits "
            "are likely underconverged",
            stacklevel=2,
        )
    tau_hat, r_profile = change_point(logliks)
    return DegreeSelectionTrace(
        degrees=degrees,
        logliks=logliks,
        increments=increments,
        r_profile=r_profile,
        tau_hat=tau_hat,
        m_hat=int(degrees[tau_hat]),
        fits=fits,
    )
