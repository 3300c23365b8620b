"""Pure-NumPy kernel implementations.

Fallback twin of the Cython extension in ``_fast.pyx``.  Both backends must
implement the same contracts with the same branch conventions so results
agree; the cross-backend tests hold them to 1e-12 relative.

Conventions shared by every function here:
  * piecewise-constant hazards are described by ``edges`` (strictly
    increasing interior breakpoints, length m) and ``rates`` (length m + 1);
    intervals are left-closed / right-open, the last rate extends to +inf
  * inputs are 1-d float64 arrays; scalars are the caller's problem
"""

import numpy as np


def weibull_invert(mass, shape, scale):
    """Solve (t/scale)**shape = mass for t, elementwise. mass >= 0."""
    inv_shape = 1.0 / shape
    return np.power(mass, inv_shape) * scale


def constant_invert(mass, rate):
    """Solve rate * t = mass for t; rate == 0 gives +inf for positive mass."""
    mass = np.asarray(mass, dtype=np.float64)
    if rate > 0.0:
        return mass / rate
    return np.where(mass > 0.0, np.inf, 0.0)


def _prefix(edges, rates):
    # prefix[k] = cumulative hazard at the left edge of interval k
    m = edges.shape[0]
    prefix = np.empty(m + 1)
    prefix[0] = 0.0
    if m:
        lefts = np.concatenate(([0.0], edges[:-1]))
        prefix[1:] = np.cumsum(rates[:m] * (edges - lefts))
    return prefix


def piecewise_rate(t, edges, rates):
    """Rate of the interval containing each t (left-closed intervals)."""
    idx = np.searchsorted(edges, t, side="right")
    return rates[idx]


def piecewise_cumhaz(t, edges, rates):
    """Exact cumulative hazard of a piecewise-constant rate at each t."""
    prefix = _prefix(edges, rates)
    idx = np.searchsorted(edges, t, side="right")
    lefts = np.concatenate(([0.0], edges))
    return prefix[idx] + rates[idx] * (t - lefts[idx])


def piecewise_invert(mass, edges, rates):
    """Smallest t with cumulative hazard >= mass; +inf when unreachable."""
    mass = np.asarray(mass, dtype=np.float64)
    prefix = _prefix(edges, rates)
    lefts = np.concatenate(([0.0], edges))
    m = edges.shape[0]
    # first interval whose right-edge cumulative hazard reaches the target
    k = np.searchsorted(prefix[1:], mass, side="left")
    r = rates[k]
    with np.errstate(invalid="ignore", divide="ignore"):
        interp = lefts[k] + (mass - prefix[k]) / r
    flat = r == 0.0
    out = np.where(flat, lefts[k], interp)
    # a zero tail rate can never accumulate further mass
    out[(k == m) & flat & (mass > prefix[m])] = np.inf
    return out


def product_limit(times, events):
    """Kaplan-Meier accumulation over time-sorted observations.

    ``times`` ascending, ``events`` 0/1 flags aligned with it.  Returns
    (unique_times, at_risk, n_events, survival); survival is the running
    product of (1 - d_k / n_k).
    """
    uniq, first, counts = np.unique(times, return_index=True, return_counts=True)
    deaths = np.add.reduceat(np.asarray(events, dtype=np.int64), first)
    at_risk = times.shape[0] - first.astype(np.int64)
    factors = 1.0 - deaths / at_risk
    return uniq, at_risk, deaths, np.cumprod(factors)
