"""Power-law rate fitting and envelope verification for norm sequences.

The experiments produce sequences ``(n_i, v_i)`` of positive norms along a
geometric parameter grid.  Two questions recur:

* what power law ``v ~ C n^(-rho) (log n)^b`` fits the tail of the sequence
  (:func:`fit_power_law`), and
* is the sequence dominated by a stated envelope ``C F(n)`` once the
  constant is calibrated on the first few points (:func:`envelope_check`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EnvelopeResult",
    "NormSequence",
    "RateFit",
    "envelope_check",
    "fit_power_law",
]


@dataclass(frozen=True)
class NormSequence:
    """A positive sequence ``values`` along an increasing positive grid ``ns``."""

    ns: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        ns = np.asarray(self.ns, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if ns.ndim != 1 or ns.shape != values.shape:
            raise ValueError("ns and values must be equal-length 1-D arrays")
        if not np.all(ns > 0.0) or not np.all(np.diff(ns) > 0.0):
            raise ValueError("ns must be positive and strictly increasing")
        if not np.all(values > 0.0):
            raise ValueError("values must be positive")
        object.__setattr__(self, "ns", ns)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.ns.shape[0]


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit ``log v = intercept - exponent*log n + log_power*log log n``."""

    exponent: float
    log_power: float
    intercept: float
    residual_rms: float
    window: tuple
    n_used: int


def _window_mask(ns, window):
    if isinstance(window, str):
        if window == "all":
            lo, hi = ns[0], ns[-1]
        elif window == "upper-half":
            lo, hi = math.sqrt(ns[0] * ns[-1]), ns[-1]
        else:
            raise ValueError(f"unknown window {window!r}")
    else:
        lo, hi = window
    mask = (ns >= lo) & (ns <= hi)
    return mask, (float(lo), float(hi))


def fit_power_law(seq, with_log=False, window="upper-half"):
    """Fit ``v ~ C n^(-exponent) (log n)^(log_power)`` on a window of ``seq``.

    ``window`` is ``"upper-half"`` (upper logarithmic half of the grid, the
    default, which discounts pre-asymptotic transients), ``"all"``, or an
    explicit ``(lo, hi)`` pair.  ``with_log=True`` adds the ``log log n``
    regressor; it requires the window to lie strictly above 1.
    """
    if len(seq) < 8:
        raise ValueError(f"need at least 8 samples to fit, got {len(seq)}")
    if seq.ns[-1] < 100.0 * seq.ns[0]:
        raise ValueError(
            "grid must span at least two decades "
            f"(got [{seq.ns[0]:g}, {seq.ns[-1]:g}])"
        )
    mask, bounds = _window_mask(seq.ns, window)
    ns, vals = seq.ns[mask], seq.values[mask]
    needed = 5 if with_log else 4
    if ns.shape[0] < needed:
        raise ValueError(f"window {bounds} keeps only {ns.shape[0]} samples")

    ln_n = np.log(ns)
    cols = [np.ones_like(ln_n), ln_n]
    if with_log:
        if np.any(ns <= 1.0):
            raise ValueError("with_log requires the fit window to lie above 1")
        cols.append(np.log(ln_n))
    design = np.column_stack(cols)
    target = np.log(vals)
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ coef
    return RateFit(
        exponent=float(-coef[1]),
        log_power=float(coef[2]) if with_log else 0.0,
        intercept=float(coef[0]),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        window=bounds,
        n_used=int(ns.shape[0]),
    )


@dataclass(frozen=True)
class EnvelopeResult:
    """Outcome of an envelope domination check.

    ``constant`` is the ratio calibrated on the burn-in points;
    ``violations`` lists grid values where domination fails.
    """

    ok: bool
    constant: float
    margin: float
    violations: tuple


def envelope_check(seq, envelope, margin=1.0, burn_in=0.1):
    """Check ``values <= margin * C * envelope(n)`` beyond a burn-in prefix.

    ``C`` is calibrated as the largest ratio ``value/envelope`` over the
    first ``max(3, ceil(burn_in * len))`` points; the remaining points must
    stay below ``margin * C * envelope`` (up to roundoff slack).
    """
    if len(seq) < 4:
        raise ValueError(f"need at least 4 samples, got {len(seq)}")
    env = np.array([float(envelope(n)) for n in seq.ns])
    if not np.all(env > 0.0):
        raise ValueError("envelope must be positive on the grid")
    head = max(3, math.ceil(burn_in * len(seq)))
    constant = float(np.max(seq.values[:head] / env[:head]))
    allowed = margin * constant * env * (1.0 + 1e-12)
    bad = np.nonzero(seq.values[head:] > allowed[head:])[0] + head
    return EnvelopeResult(
        ok=bad.size == 0,
        constant=constant,
        margin=float(margin),
        violations=tuple(float(seq.ns[i]) for i in bad),
    )
