"""Weighted boundary-derivative norms.

For an analytic function ``f`` on the right half-plane, this module computes

    N_q(f) = integral_0^inf  psi_q(xi) * sup_{eta in R} |f'(xi + i*eta)|  d(xi),

where ``psi_q(xi) = min(xi, 1)^q`` (``q=None`` means no weight).  Together
with the value at infinity this quantity controls the operator norm of ``f``
applied to a half-plane generator, which is why everything here is obsessive
about *certified* error accounting: when ``converged`` is set, the reported
``error_estimate + tail_bound`` does not exceed ``rel_tol * value``.

Two evaluation modes are supported:

* ``mode="exact"``: the inner supremum over ``eta`` is located numerically
  (vectorised grid with injected analytic candidates, then golden-section
  refinement) and certified complete by comparing against a decreasing
  analytic majorant at the far end of the search window.
* ``mode="bound"``: closed-form upper envelopes replace the supremum.  The
  result dominates the exact norm and is far cheaper.

Built-in families dispatch natively.  Any other object participates by
providing the duck-typed protocol methods::

    derivative_line_log_abs(xi, etas) -> array of log|f'(xi + i*etas)|
    eta_hints(xi)                     -> (eta_lo, eta_hi, extra_candidates)
    eta_tail_log_majorant(xi, eta)    -> certified log-majorant, decreasing
                                         beyond the hinted window
    integral_head_bound(q, x)         -> upper bound for the integral on (0, x]
    integral_tail_bound(q, X)         -> upper bound for the integral on [X, oo)
    quad_breakpoints()                -> structural xi breakpoints
    bound_sup(xi)                     -> closed-form sup bound (``mode="bound"``)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import singledispatch

import numpy as np

from .extremal import (
    _sup_sqrt_kernel,
    _v_envelope_bound,
    _w_envelope_bound,
    golden_section_max,
    tau1,
    tau2,
    xi_interval_cayley,
)
from .functions import (
    CayleyPower,
    CayleyShifted,
    InverseGen,
    InverseGenPoly,
    VariableCayley,
    derivative_log_magnitude,
    derivative_log_magnitude_line,
)
from .quadrature import integrate_adaptive

__all__ = [
    "InnerSupWarning",
    "NormResult",
    "QuadConfig",
    "b0q_norm",
    "inner_sup",
    "psi",
]

_BUILTIN = (CayleyPower, CayleyShifted, VariableCayley, InverseGen, InverseGenPoly)

_GRID_POINTS = 160
_EXTEND_FACTOR = 32.0
_MAX_EXTENSIONS = 3
_STEP = 8.0  # window growth factor for the head/tail extension loops
_MAX_WINDOW_STEPS = 200
_XI_FLOOR, _XI_CEIL = 1e-290, 1e290


class InnerSupWarning(UserWarning):
    """The inner supremum could not be certified complete."""


@dataclass(frozen=True)
class QuadConfig:
    """Tuning knobs for the outer xi-integration."""

    rel_tol: float = 1e-6
    abs_floor: float = 1e-14
    max_depth: int = 40
    tail_start: float | None = None
    breakpoints: tuple = ()


@dataclass(frozen=True)
class NormResult:
    """A computed norm with its certified error decomposition.

    ``value`` approximates the integral over the window actually quadratured;
    ``error_estimate`` is the quadrature error over that window and
    ``tail_bound`` an analytic bound on everything outside it.  When
    ``converged`` is true, ``error_estimate + tail_bound <= rel_tol * value``.
    """

    value: float
    error_estimate: float
    tail_bound: float
    converged: bool


def psi(q, xi):
    """The weight ``min(xi, 1)^q`` (``q=None`` -> constant 1)."""
    if xi <= 0.0:
        raise ValueError(f"weight argument must be positive, got {xi}")
    if q is None or xi >= 1.0:
        return 1.0
    return xi**q


def _psi_integral(q, x):
    """Closed form of ``integral_0^x psi_q``."""
    qq = 0.0 if q is None else q
    return min(x, 1.0) ** (1.0 + qq) / (1.0 + qq) + max(0.0, x - 1.0)


def _safe_log(x):
    return math.log(x) if x > 0.0 else -math.inf


def _log_sum_exp(terms):
    finite = [v for v in terms if v > -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(math.fsum(math.exp(v - top) for v in finite))


# --------------------------------------------------------------------------
# protocol dispatch: built-ins are registered, anything else duck-types
# --------------------------------------------------------------------------


def _forward(method):
    def fallback(family, *args):
        fn = getattr(family, method, None)
        if fn is None:
            raise TypeError(
                f"{type(family).__name__} is not a built-in family and does "
                f"not provide the protocol method {method!r}"
            )
        return fn(*args)

    return fallback


@singledispatch
def _line_log_abs(family, xi, etas):
    return np.asarray(
        _forward("derivative_line_log_abs")(family, xi, etas), dtype=float
    )


@singledispatch
def _eta_hints(family, xi):
    return _forward("eta_hints")(family, xi)


@singledispatch
def _eta_tail_log_majorant(family, xi, eta):
    return float(_forward("eta_tail_log_majorant")(family, xi, eta))


@singledispatch
def _head_bound(family, q, x):
    return float(_forward("integral_head_bound")(family, q, x))


@singledispatch
def _tail_bound(family, q, X):
    return float(_forward("integral_tail_bound")(family, q, X))


@singledispatch
def _quad_breakpoints(family):
    return tuple(_forward("quad_breakpoints")(family))


@singledispatch
def _bound_sup(family, xi):
    return float(_forward("bound_sup")(family, xi))


for _fam in _BUILTIN:
    _line_log_abs.register(_fam, derivative_log_magnitude_line)
del _fam


# --------------------------------------------------------------------------
# inner supremum over eta
# --------------------------------------------------------------------------


def _log_kernel_sup(m, r, A, B):
    return _sup_sqrt_kernel(m, r, A, B)[0]


def _kernel_peak_candidates(m, r, A, B):
    """Interior peak of the sqrt-kernel plus a curvature-scaled spread.

    For large powers the peak (in ``s = eta^2``) has width ``~1/sqrt(curv)``
    and a bare geometric grid steps right over it, so these candidates are
    injected into the search grid explicitly.
    """
    if m <= 0.0:
        return []
    s1 = (m * B - (m + r + 1.0) * A) / (r + 1.0)
    if s1 <= 0.0:
        return []
    curv = m / (A + s1) ** 2 - (m + r + 1.0) / (B + s1) ** 2
    spread = 1.0 / math.sqrt(curv) if curv > 0.0 else 0.0
    out = []
    for k in (-3.0, -1.5, 0.0, 1.5, 3.0):
        s = s1 + k * spread
        if s > 0.0:
            out.append(math.sqrt(s))
    return out


def _scalar_log_abs(family, xi):
    if isinstance(family, _BUILTIN):
        return lambda eta: derivative_log_magnitude(family, complex(xi, eta))
    return lambda eta: float(_line_log_abs(family, xi, np.array([eta]))[0])


def _inner_sup_exact_log(family, xi):
    lo, hi, extras = _eta_hints(family, xi)
    extras = [e for e in extras if e > 0.0 and math.isfinite(e)]
    if extras:
        hi = max(hi, 2.0 * max(extras))
        lo = min(lo, 0.5 * min(extras))
    scalar = _scalar_log_abs(family, xi)

    def best_on(grid):
        vals = np.asarray(_line_log_abs(family, xi, grid), dtype=float)
        vals = np.where(np.isnan(vals), -np.inf, vals)
        i = int(np.argmax(vals))
        top = float(vals[i])
        a = float(grid[i - 1]) if i > 0 else 0.0
        b = float(grid[i + 1]) if i + 1 < len(grid) else float(grid[-1])
        if b > a and math.isfinite(top):
            tol = max(1e-13, 1e-10 * (b - a))
            _, refined = golden_section_max(scalar, a, b, abs_tol=tol)
            top = max(top, refined)
        return top

    grid = np.unique(
        np.concatenate([[0.0], np.geomspace(lo, hi, _GRID_POINTS), extras])
    )
    best = best_on(grid)

    extensions = 0
    while (
        _eta_tail_log_majorant(family, xi, hi) > best
        and extensions < _MAX_EXTENSIONS
    ):
        new_hi = hi * _EXTEND_FACTOR
        best = max(best, best_on(np.geomspace(hi, new_hi, 48)))
        hi = new_hi
        extensions += 1
    if _eta_tail_log_majorant(family, xi, hi) > best:
        warnings.warn(
            f"inner supremum at xi={xi!r} for {type(family).__name__} not "
            f"certified below the majorant by eta={hi:.3g}; the returned "
            "value may undershoot",
            InnerSupWarning,
            stacklevel=3,
        )
    return best


def inner_sup(family, xi, mode="exact"):
    """``sup_eta |f'(xi + i*eta)|`` (``mode="exact"``) or a closed-form upper
    envelope for it (``mode="bound"``)."""
    if xi <= 0.0:
        raise ValueError(f"xi must be positive, got {xi}")
    if mode == "exact":
        return math.exp(_inner_sup_exact_log(family, xi))
    if mode == "bound":
        return _bound_sup(family, xi)
    raise ValueError(f"mode must be 'exact' or 'bound', got {mode!r}")


# --------------------------------------------------------------------------
# built-in registrations: eta search hints
# --------------------------------------------------------------------------


@_eta_hints.register(CayleyPower)
def _(family, xi):
    n, p = family.n, family.p
    A, B = (xi - 1.0) ** 2, (xi + 1.0) ** 2
    extras = _kernel_peak_candidates(n - 1.0, 2.0 * p + 1.0, A, B)
    extras += _kernel_peak_candidates(float(n), 2.0 * p, A, B)
    span = max([B, 1.0] + [e * e for e in extras])
    return 1e-9 * math.sqrt(B), 4.0 * math.sqrt(span), tuple(extras)


@_eta_hints.register(CayleyShifted)
def _(family, xi):
    n, a = family.n, family.alpha
    u = xi + family.c
    A, B = (u - 1.0) ** 2, (u + 1.0) ** 2
    extras = _kernel_peak_candidates(n - 1.0, a + 1.0, A, B)
    extras += _kernel_peak_candidates(float(n), a, A, B)
    span = max([B, 1.0] + [e * e for e in extras])
    return 1e-9 * math.sqrt(B), 4.0 * math.sqrt(span), tuple(extras)


@_eta_hints.register(VariableCayley)
def _(family, xi):
    n, a, c = family.n, family.alpha, family.c
    weff = _omega_effective(family)
    A, B = (xi - weff + c) ** 2, (xi + weff + c) ** 2
    extras = _kernel_peak_candidates(n - 1.0, a + 1.0, A, B)
    extras += _kernel_peak_candidates(float(n), a, A, B)
    extras += [xi + w + c for w in family.omegas]
    span = max([B, (xi + family.omega_q + c) ** 2, 1.0] + [e * e for e in extras])
    return 1e-9 * math.sqrt(B), 4.0 * math.sqrt(span), tuple(extras)


def _eta_hints_inverse(xi, t, alpha):
    # In the variable tau = xi^2 + s the exponential factor is exactly
    # e^(-zeta/tau) with zeta = t*xi, so the stationary points of the
    # envelope profiles mark the peak region: s = tau - xi^2.
    zeta = t * xi
    extras = []
    taus = [tau1(zeta, (alpha + 1.0) / 2.0), tau1(zeta, (alpha + 2.0) / 2.0)]
    taus.append(tau2(zeta, max(alpha / 2.0, 0.25)))
    for tau in taus:
        s = tau - xi * xi
        if s > 0.0:
            extras.append(math.sqrt(s))
    span = max([(xi + 1.0) ** 2, 1.0] + [e * e for e in extras])
    return 1e-9 * (xi + 1.0), 6.0 * math.sqrt(span), tuple(extras)


@_eta_hints.register(InverseGen)
def _(family, xi):
    return _eta_hints_inverse(xi, family.t, family.alpha)


@_eta_hints.register(InverseGenPoly)
def _(family, xi):
    return _eta_hints_inverse(xi, family.t, 2.0 * family.p)


# --------------------------------------------------------------------------
# built-in registrations: decreasing eta-tail majorants
# --------------------------------------------------------------------------


def _cayley_majorant_log(n, r, c_g, c_h, A, B, s):
    """log( c_g*sqrt(kern(n, r)) + c_h*sqrt(kern(n-1, r+1)) ) at fixed ``s``.

    Triangle-inequality majorant of |f'| for the Cayley-type families; both
    kernels are decreasing in ``s`` past their interior peaks, which the hint
    window always covers, so this certifies the search cutoff.
    """
    terms = []
    if c_g > 0.0:
        lg = 0.5 * (n * _safe_log(A + s) - (n + r + 1.0) * math.log(B + s))
        terms.append(math.log(c_g) + lg)
    if c_h > 0.0:
        lh = 0.5 * ((n - 1.0) * _safe_log(A + s) - (n + r + 1.0) * math.log(B + s))
        terms.append(math.log(c_h) + lh)
    return _log_sum_exp(terms)


@_eta_tail_log_majorant.register(CayleyPower)
def _(family, xi, eta):
    n, p = float(family.n), family.p
    A, B = (xi - 1.0) ** 2, (xi + 1.0) ** 2
    return _cayley_majorant_log(n, 2.0 * p, 2.0 * p, 2.0 * n, A, B, eta * eta)


@_eta_tail_log_majorant.register(CayleyShifted)
def _(family, xi, eta):
    n, a = float(family.n), family.alpha
    u = xi + family.c
    A, B = (u - 1.0) ** 2, (u + 1.0) ** 2
    return _cayley_majorant_log(n, a, a, 2.0 * n, A, B, eta * eta)


@_eta_tail_log_majorant.register(VariableCayley)
def _(family, xi, eta):
    n, a, c = float(family.n), family.alpha, family.c
    weff = _omega_effective(family)
    A, B = (xi - weff + c) ** 2, (xi + weff + c) ** 2
    return _cayley_majorant_log(n, a, a, 2.0 * n * family.omega_q, A, B, eta * eta)


def _inverse_majorant_log(t, alpha, xi, eta):
    """Triangle-inequality majorant, decreasing once ``s >= (xi+1)^2``."""
    s = eta * eta
    inner = xi * xi + s
    outer = (xi + 1.0) ** 2 + s
    return _log_sum_exp(
        [
            math.log(t) - 0.5 * math.log(inner) - 0.5 * (alpha + 1.0) * math.log(outer),
            (math.log(alpha) if alpha > 0.0 else -math.inf)
            + 0.5 * math.log(inner)
            - 0.5 * (alpha + 2.0) * math.log(outer),
            -0.5 * (alpha + 2.0) * math.log(outer),
        ]
    )


@_eta_tail_log_majorant.register(InverseGen)
def _(family, xi, eta):
    return _inverse_majorant_log(family.t, family.alpha, xi, eta)


@_eta_tail_log_majorant.register(InverseGenPoly)
def _(family, xi, eta):
    return _inverse_majorant_log(family.t, 2.0 * family.p, xi, eta)


# --------------------------------------------------------------------------
# built-in registrations: closed-form sup bounds (mode="bound")
# --------------------------------------------------------------------------


def _omega_effective(family):
    """A single frequency whose kernel dominates every cross-ratio factor.

    Each factor |z - w + c| / |z + w + c| is bounded by the corresponding
    ratio at ``w_eff = min(omega_p, c^2/omega_q)`` because
    ``(xi + c)^2 + s >= c^2 >= w_eff * w`` for every factor frequency ``w``.
    """
    if family.c <= 0.0:
        return 0.0
    return min(family.omega_p, family.c**2 / family.omega_q)


@_bound_sup.register(CayleyPower)
def _(family, xi):
    n, p = float(family.n), family.p
    A, B = (xi - 1.0) ** 2, (xi + 1.0) ** 2
    g = math.exp(_log_kernel_sup(n, 2.0 * p, A, B))
    h = math.exp(_log_kernel_sup(n - 1.0, 2.0 * p + 1.0, A, B))
    return 2.0 * p * g + 2.0 * n * h


@_bound_sup.register(CayleyShifted)
def _(family, xi):
    n, a = float(family.n), family.alpha
    u = xi + family.c
    A, B = (u - 1.0) ** 2, (u + 1.0) ** 2
    g = math.exp(_log_kernel_sup(n, a, A, B)) if a > 0.0 else 0.0
    h = math.exp(_log_kernel_sup(n - 1.0, a + 1.0, A, B))
    return a * g + 2.0 * n * h


@_bound_sup.register(VariableCayley)
def _(family, xi):
    n, a, c = float(family.n), family.alpha, family.c
    weff = _omega_effective(family)
    A, B = (xi - weff + c) ** 2, (xi + weff + c) ** 2
    g = math.exp(_log_kernel_sup(n, a, A, B)) if a > 0.0 else 0.0
    h = math.exp(_log_kernel_sup(n - 1.0, a + 1.0, A, B))
    return a * g + 2.0 * n * family.omega_q * h


@_bound_sup.register(InverseGen)
def _(family, xi):
    t, a = family.t, family.alpha
    out = t * _v_envelope_bound(t * xi, (a + 1.0) / 2.0)
    if a > 0.0:
        out += a * (xi + 1.0) ** -(a + 1.0)
    return out + (xi + 1.0) ** -(a + 2.0)


@_bound_sup.register(InverseGenPoly)
def _(family, xi):
    t, p = family.t, family.p
    out = (t + 1.0) * _v_envelope_bound(t * xi, p + 0.5)
    cap = _w_envelope_bound(t * xi, p)
    if xi > 1e-150:
        cap = min(cap, xi ** -(2.0 * p + 1.0))
    return out + 2.0 * p * cap


# --------------------------------------------------------------------------
# built-in registrations: certified head bounds on (0, x]
# --------------------------------------------------------------------------


@_head_bound.register(CayleyPower)
def _(family, q, x):
    return (2.0 * family.n + 2.0 * family.p) * _psi_integral(q, x)


@_head_bound.register(CayleyShifted)
def _(family, q, x):
    return (2.0 * family.n + family.alpha) * _psi_integral(q, x)


@_head_bound.register(VariableCayley)
def _(family, q, x):
    wpc = family.omega_p + family.c
    coef = family.alpha * wpc ** -(family.alpha + 1.0)
    coef += 2.0 * family.n * family.omega_q * wpc ** -(family.alpha + 2.0)
    return coef * _psi_integral(q, x)


def _sqrt_weight_head(coef, q, x):
    """``coef * integral_0^x psi_q(xi) xi^(-1/2)`` upper bound
    (uses ``psi_q(xi) <= xi^q`` for xi >= 1 as well, so valid for all x)."""
    qq = (0.0 if q is None else q) + 0.5
    return coef * x**qq / qq


@_head_bound.register(InverseGen)
def _(family, q, x):
    t, a = family.t, family.alpha
    head = _sqrt_weight_head(math.sqrt(t * (a + 2.0)), q, x)
    return head + (a + 1.0) * _psi_integral(q, x)


@_head_bound.register(InverseGenPoly)
def _(family, q, x):
    t, p = family.t, family.p
    coef = (t + 1.0) * math.sqrt((2.0 * p + 2.0) / t)
    return _sqrt_weight_head(coef, q, x) + 2.0 * p * _psi_integral(q, x)


# --------------------------------------------------------------------------
# built-in registrations: certified tail bounds on [X, oo)
# --------------------------------------------------------------------------


def _gamma_tail(power, y):
    """Upper bound for ``integral_0^y s^(power-1) e^(-s) ds``."""
    return min(math.gamma(power), y**power / power)


def _require_past_window(family, X, edge):
    if X < edge * (1.0 - 1e-9):
        raise ValueError(
            f"tail bound for {type(family).__name__} requires X >= {edge:.6g} "
            f"(past the interior-supremum window), got {X!r}"
        )


@_tail_bound.register(CayleyPower)
def _(family, q, X):
    n, p = float(family.n), family.p
    _require_past_window(family, X, xi_interval_cayley(family.n, p)[1])
    y0 = 2.0 * n / (X + 1.0)
    out = 2.0 * p * (2.0 * n) ** (-2.0 * p) * _gamma_tail(2.0 * p, y0)
    if n >= 2.0:
        y1 = 2.0 * (n - 1.0) / (X + 1.0)
        out += (
            2.0
            * n
            * (2.0 * (n - 1.0)) ** -(2.0 * p + 2.0)
            * _gamma_tail(2.0 * p + 2.0, y1)
        )
    else:
        out += 2.0 * (X + 1.0) ** -(2.0 * p + 2.0) / (2.0 * p + 2.0)
    return out


@_tail_bound.register(CayleyShifted)
def _(family, q, X):
    n, a, c = float(family.n), family.alpha, family.c
    rho = math.sqrt(n / (n + a + 1.0))
    _require_past_window(family, X + c, (1.0 + rho) / (1.0 - rho))
    u1 = X + c + 1.0
    out = 0.0
    if a > 0.0:
        out += a * (2.0 * n) ** -a * _gamma_tail(a, 2.0 * n / u1)
    if n >= 2.0:
        y1 = 2.0 * (n - 1.0) / u1
        out += 2.0 * n * (2.0 * (n - 1.0)) ** -(a + 1.0) * _gamma_tail(a + 1.0, y1)
    else:
        out += 2.0 * u1 ** -(a + 1.0) / (a + 1.0)
    return out


@_tail_bound.register(VariableCayley)
def _(family, q, X):
    n, a = float(family.n), family.alpha
    w = X + family.omega_p + family.c
    out = w**-a if a > 0.0 else 0.0
    return out + 2.0 * n * family.omega_q * w ** -(a + 1.0) / (a + 1.0)


def _inverse_tail(t, alpha, q, X):
    out = t * X ** -(alpha + 1.0) / (alpha + 1.0)
    if alpha > 0.0:
        out += (X + 1.0) ** -alpha
    return out + (X + 1.0) ** -(alpha + 1.0) / (alpha + 1.0)


@_tail_bound.register(InverseGen)
def _(family, q, X):
    return _inverse_tail(family.t, family.alpha, q, X)


@_tail_bound.register(InverseGenPoly)
def _(family, q, X):
    return _inverse_tail(family.t, 2.0 * family.p, q, X)


# --------------------------------------------------------------------------
# built-in registrations: structural breakpoints for the outer integral
# --------------------------------------------------------------------------


@_quad_breakpoints.register(CayleyPower)
def _(family):
    x0, x1 = xi_interval_cayley(family.n, family.p)
    return (x0, 1.0, x1)


def _shifted_window_points(n, alpha, c, scale):
    rho = math.sqrt(n / (n + alpha + 1.0))
    v1 = (1.0 + rho) / (1.0 - rho)
    pts = []
    for v in (1.0 / v1, v1):
        xi = scale * v - c
        if xi > 0.0:
            pts.append(xi)
    return pts


@_quad_breakpoints.register(CayleyShifted)
def _(family):
    pts = _shifted_window_points(family.n, family.alpha, family.c, 1.0)
    return tuple(sorted({1.0, *pts}))


@_quad_breakpoints.register(VariableCayley)
def _(family):
    pts = [1.0, family.omega_p + family.c, family.omega_q + family.c]
    weff = _omega_effective(family)
    if weff > 0.0:
        pts += _shifted_window_points(family.n, family.alpha, family.c, weff)
    return tuple(sorted(set(pts)))


def _inverse_breakpoints(family):
    t = family.t
    return tuple(sorted({1.0 / t, 1.0, t}))


_quad_breakpoints.register(InverseGen, _inverse_breakpoints)
_quad_breakpoints.register(InverseGenPoly, _inverse_breakpoints)


# --------------------------------------------------------------------------
# the outer integral
# --------------------------------------------------------------------------


def b0q_norm(family, q=None, mode="exact", config=None):
    """Compute ``N_q(f)`` with certified error accounting.

    ``q=None`` computes the unweighted norm.  ``mode`` selects how the inner
    supremum is evaluated (see :func:`inner_sup`).  Returns a
    :class:`NormResult`.
    """
    if q is not None and q < 0.0:
        raise ValueError(f"q must be None or >= 0, got {q!r}")
    if mode not in ("exact", "bound"):
        raise ValueError(f"mode must be 'exact' or 'bound', got {mode!r}")
    cfg = config if config is not None else QuadConfig()

    structural = [float(b) for b in _quad_breakpoints(family) if b > 0.0]
    if not structural:
        structural = [1.0]
    points = sorted({*structural, 1.0, *(float(b) for b in cfg.breakpoints if b > 0.0)})

    if mode == "exact":

        def sup_at(xi):
            return math.exp(_inner_sup_exact_log(family, xi))

    else:

        def sup_at(xi):
            return _bound_sup(family, xi)

    def integrand(u):
        xi = math.exp(u)
        return psi(q, xi) * sup_at(xi) * xi

    # Budget split: 40% of rel_tol to quadrature error, 20% to each of the
    # head and tail remainders, so converged results obey
    # error + tail <= rel_tol * value with slack.
    quad_rel = 0.4 * cfg.rel_tol

    def run_quad(x_a, x_b, inner_points=()):
        return integrate_adaptive(
            integrand,
            math.log(x_a),
            math.log(x_b),
            rel_tol=quad_rel,
            abs_floor=cfg.abs_floor,
            max_depth=cfg.max_depth,
            breakpoints=tuple(math.log(b) for b in inner_points),
        )

    x_lo = 0.25 * min(points)
    x_hi = 4.0 * max(points)
    if cfg.tail_start is not None:
        x_hi = max(float(cfg.tail_start), x_hi)

    base = run_quad(x_lo, x_hi, [b for b in points if x_lo < b < x_hi])
    value, error, ok = base.value, base.error, base.converged

    for _ in range(_MAX_WINDOW_STEPS):
        target = 0.2 * cfg.rel_tol * value
        if value <= 0.0 or _head_bound(family, q, x_lo) <= target:
            break
        if x_lo <= _XI_FLOOR:
            break
        new_lo = x_lo / _STEP
        seg = run_quad(new_lo, x_lo)
        value += seg.value
        error += seg.error
        ok = ok and seg.converged
        x_lo = new_lo

    for _ in range(_MAX_WINDOW_STEPS):
        target = 0.2 * cfg.rel_tol * value
        if value <= 0.0 or _tail_bound(family, q, x_hi) <= target:
            break
        if x_hi >= _XI_CEIL:
            break
        new_hi = x_hi * _STEP
        seg = run_quad(x_hi, new_hi)
        value += seg.value
        error += seg.error
        ok = ok and seg.converged
        x_hi = new_hi

    tail = _head_bound(family, q, x_lo) + _tail_bound(family, q, x_hi)
    converged = (
        ok
        and value > 0.0
        and error + tail <= cfg.rel_tol * value * (1.0 + 1e-12)
    )
    return NormResult(value, error, tail, bool(converged))
