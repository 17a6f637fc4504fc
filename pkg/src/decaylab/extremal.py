"""Suprema over the vertical coordinate of the envelope functions.

The boundary-norm integrands are controlled by three families of envelopes,
each maximized over ``s = eta^2 in [0, inf)`` at fixed abscissa ``xi``:

* Cayley kernels ``(A+s)^m / (B+s)^(m+r+1)`` with ``A = (xi-1)^2``,
  ``B = (xi+1)^2`` (and shifted/scaled variants ``A = (xi-w+c)^2``,
  ``B = (xi+w+c)^2``).  The stationarity condition is linear in ``s``:

      s1 = (m B - (m+r+1) A) / (r+1),

  the supremum is interior exactly when ``s1 > 0``, and then

      A + s1 = m (B-A)/(r+1),      B + s1 = (m+r+1)(B-A)/(r+1).

* Inverse-generator envelopes ``e^(-zeta/tau) / ((tau+1)^a sqrt(tau))`` in
  ``tau = xi^2 + s`` with ``zeta = t xi``.  The stationary point

      tau1 = ((2 zeta - 1) + sqrt((2 zeta - 1)^2 + 8 zeta (2a+1))) / (2 (2a+1))

  satisfies ``tau1 >= zeta/(2a+1)``, which yields the closed upper bound
  ``1 / ((c zeta + 1)^a sqrt(c zeta))`` with ``c = 1/(2a+1)``.

* The endpoint-domination ratio
  ``phi(w) = ((zeta-w)^2+s) / ((zeta+w)^2+s)``, which is decreasing then
  increasing in ``w`` with critical point ``sqrt(zeta^2+s)``; the left
  endpoint of ``[omega_p, omega_q]`` dominates iff
  ``zeta^2 + s >= omega_p omega_q``, so the criterion holding uniformly in
  ``s >= 0`` is ``zeta^2 >= omega_p omega_q``.

Everything here is exercised against ``brute_force_sup`` (geometric grid
plus golden-section refinement), which is also exported as the reference
maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SupResult",
    "golden_section_max",
    "brute_force_sup",
    "sup_g_cayley",
    "sup_h_cayley",
    "sup_g_exp",
    "sup_h_exp",
    "sup_bound_inv",
    "tau1",
    "tau2",
    "g_cayley",
    "g_exp",
    "g_inv",
    "h_inv",
    "xi_interval_cayley",
    "xi_upper_exp",
    "omega_monotone_check",
    "phi_ratio",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SupResult:
    """A supremum over ``s >= 0``: the value, where, and how it was found.

    ``argmax_s == 0.0`` marks a boundary supremum.  ``warning`` is set when
    a brute-force search could not certify its cutoff or when a closed form
    had to fall back to search.
    """

    value: float
    argmax_s: float
    method: str  # "closed_form" | "brute_force"
    log_value: float
    warning: str | None = None


def golden_section_max(f, a: float, b: float, abs_tol: float = 1e-10,
                       max_iter: int = 200):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    if not b >= a:
        raise ValueError(f"need b >= a, got [{a}, {b}]")
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if (b - a) <= abs_tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def brute_force_sup(f, cutoff: float, tol: float = 1e-8) -> SupResult:
    """Maximize ``f`` over ``[0, cutoff]`` by geometric scan plus refinement.

    The scan uses a geometric grid (plus ``s = 0``) of 600 points and then
    refines the best bracket by golden section to ``1e-10`` absolute
    tolerance in ``s``.  If ``f(cutoff) > tol * max`` the cutoff may be
    truncating the true supremum and a warning is recorded.
    """
    cutoff = float(cutoff)
    if not (math.isfinite(cutoff) and cutoff > 0.0):
        raise ValueError(f"cutoff must be finite and > 0, got {cutoff!r}")
    grid = np.concatenate([[0.0], np.geomspace(cutoff * 1e-12, cutoff, 600)])
    vals = np.array([f(s) for s in grid], dtype=float)
    i = int(np.argmax(vals))
    best_s, best_v = float(grid[i]), float(vals[i])
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    if hi > lo:
        x, fx = golden_section_max(f, lo, hi, abs_tol=1e-10)
        if fx > best_v:
            best_s, best_v = x, fx
    warning = None
    if vals[-1] > tol * best_v:
        warning = (
            f"cutoff {cutoff:g} may be too small: f(cutoff)={vals[-1]:g} "
            f"exceeds tol*max={tol * best_v:g}"
        )
    log_value = math.log(best_v) if best_v > 0.0 else -math.inf
    return SupResult(best_v, best_s, "brute_force", log_value, warning)


# --------------------------------------------------------------------------
# Cayley-type kernels
# --------------------------------------------------------------------------


def _sup_sqrt_kernel(m: float, r: float, A: float, B: float):
    """``sup_{s>=0} sqrt((A+s)^m / (B+s)^(m+r+1))`` in log form.

    Requires ``0 <= A <= B``, ``m >= 0``, ``r > -1``.  Returns
    ``(log_value, argmax_s)``.
    """
    s1 = (m * B - (m + r + 1.0) * A) / (r + 1.0)
    if s1 > 0.0:
        # Interior: A+s1 = m(B-A)/(r+1), B+s1 = (m+r+1)(B-A)/(r+1).
        w = (B - A) / (r + 1.0)
        log_val = 0.5 * (
            m * math.log(m * w) - (m + r + 1.0) * math.log((m + r + 1.0) * w)
        )
        return log_val, s1
    if m > 0.0 and A == 0.0:
        return -math.inf, 0.0
    log_val = -0.5 * (m + r + 1.0) * math.log(B)
    if m > 0.0:
        log_val += 0.5 * m * math.log(A)
    return log_val, 0.0


def _closed(log_val: float, s_arg: float) -> SupResult:
    return SupResult(math.exp(log_val), s_arg, "closed_form", log_val)


def _check_xi(xi: float) -> float:
    xi = float(xi)
    if not (math.isfinite(xi) and xi > 0.0):
        raise ValueError(f"xi must be finite and > 0, got {xi!r}")
    return xi


def sup_g_cayley(n: int, p: float, xi: float) -> SupResult:
    """``sup_s sqrt( ((xi-1)^2+s)^n / ((xi+1)^2+s)^(n+2p+1) )``."""
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not p > 0.0:
        raise ValueError(f"p must be > 0, got {p!r}")
    xi = _check_xi(xi)
    A = (xi - 1.0) ** 2
    B = (xi + 1.0) ** 2
    return _closed(*_sup_sqrt_kernel(float(n), 2.0 * p, A, B))


def sup_h_cayley(n: int, p: float, xi: float) -> SupResult:
    """Same kernel with numerator exponent ``n-1`` (the derivative's mate)."""
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not p > 0.0:
        raise ValueError(f"p must be > 0, got {p!r}")
    xi = _check_xi(xi)
    A = (xi - 1.0) ** 2
    B = (xi + 1.0) ** 2
    return _closed(*_sup_sqrt_kernel(float(n) - 1.0, 2.0 * p + 1.0, A, B))


def _sup_g_exp_closed(m: float, r: float, omega: float, c: float, xi: float):
    A = (xi - omega + c) ** 2
    B = (xi + omega + c) ** 2
    return _sup_sqrt_kernel(m, r, A, B)


def sup_g_exp(n: int, alpha: float, omega: float, c: float, xi: float) -> SupResult:
    """``sup_s sqrt( ((xi-w+c)^2+s)^n / ((xi+w+c)^2+s)^(n+alpha+1) )``.

    The interior/boundary dichotomy via the linear candidate ``s1`` is used
    once ``n`` clears the threshold ``4 w c n/(alpha+1) > (w-c)^2``; below
    it the routine falls back to brute force and flags the fallback.
    """
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    if not omega > 0.0:
        raise ValueError(f"omega must be > 0, got {omega!r}")
    if not c >= 0.0:
        raise ValueError(f"c must be >= 0, got {c!r}")
    xi = _check_xi(xi)
    d = 4.0 * omega * c * n / (alpha + 1.0) - (omega - c) ** 2
    if d > 0.0:
        return _closed(*_sup_g_exp_closed(float(n), alpha, omega, c, xi))
    _, s1 = _sup_g_exp_closed(float(n), alpha, omega, c, xi)
    cutoff = max(10.0 * abs(s1), 1e3 * (1.0 + xi * xi))
    res = brute_force_sup(lambda s: math.sqrt(g_exp(n, alpha, omega, c, xi, s)), cutoff)
    note = (
        f"interior threshold not met (4wcn/(alpha+1) - (w-c)^2 = {d:g} <= 0); "
        "fell back to brute-force search"
    )
    warning = note if res.warning is None else f"{note}; {res.warning}"
    return SupResult(res.value, res.argmax_s, "brute_force", res.log_value, warning)


def sup_h_exp(n: int, alpha: float, omega: float, c: float, xi: float) -> SupResult:
    """Numerator exponent ``n-1`` variant; the linear candidate is always valid."""
    if n < 1 or n != int(n):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    if not omega > 0.0:
        raise ValueError(f"omega must be > 0, got {omega!r}")
    xi = _check_xi(xi)
    return _closed(*_sup_g_exp_closed(float(n) - 1.0, alpha + 1.0, omega, c, xi))


def xi_interval_cayley(n: int, p: float):
    """The ``xi`` window on which the Cayley kernel's supremum is interior.

    ``s1(xi) = -xi^2 - 1 + 2(1 + 2n/(2p+1)) xi`` is positive between the two
    reciprocal roots returned here.
    """
    b = 1.0 + 2.0 * n / (2.0 * p + 1.0)
    xi1 = b + math.sqrt(b * b - 1.0)
    return 1.0 / xi1, xi1


def xi_upper_exp(n: int, alpha: float, omega: float, c: float) -> float:
    """Upper edge of the interior window for the shifted/scaled kernel."""
    b = 2.0 * omega * n / (alpha + 1.0) + omega - c
    return b + 2.0 * omega * math.sqrt(n * (n + alpha + 1.0)) / (alpha + 1.0)


# --------------------------------------------------------------------------
# Inverse-generator envelope
# --------------------------------------------------------------------------


def tau1(zeta: float, alpha: float) -> float:
    """Stationary point of ``e^(-zeta/tau) / ((tau+1)^alpha sqrt(tau))``."""
    if not zeta > 0.0:
        raise ValueError(f"zeta must be > 0, got {zeta!r}")
    if not alpha >= 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha!r}")
    q = 2.0 * zeta - 1.0
    return (q + math.sqrt(q * q + 8.0 * zeta * (2.0 * alpha + 1.0))) / (
        2.0 * (2.0 * alpha + 1.0)
    )


def tau2(zeta: float, p: float) -> float:
    """Stationary point of ``e^(-zeta/tau) sqrt(tau) / (tau+1)^(p+1/2)``
    in the large-``tau`` normalization: the root of
    ``(p+1/2) tau^2 - zeta tau - zeta = 0``."""
    if not zeta > 0.0:
        raise ValueError(f"zeta must be > 0, got {zeta!r}")
    if not p > 0.0:
        raise ValueError(f"p must be > 0, got {p!r}")
    return (zeta + math.sqrt(zeta * zeta + (4.0 * p + 2.0) * zeta)) / (2.0 * p + 1.0)


def _v_envelope_bound(zeta: float, a: float) -> float:
    """Closed bound ``1/((c zeta + 1)^a sqrt(c zeta))``, ``c = 1/(2a+1)``.

    Valid for ``a >= 1/2`` (the stationary point satisfies
    ``tau1 >= c zeta`` and the envelope is increasing below it).
    """
    cz = zeta / (2.0 * a + 1.0)
    return math.exp(-a * math.log1p(cz) - 0.5 * math.log(cz))


def _w_envelope_bound(zeta: float, p: float) -> float:
    """Closed bound ``(c zeta + 1)^(-(p+1/2))`` with ``c = 2/(2p+1)``."""
    cz = 2.0 * zeta / (2.0 * p + 1.0)
    return math.exp(-(p + 0.5) * math.log1p(cz))


def sup_bound_inv(t: float, alpha: float, xi: float) -> float:
    """Certified upper bound for ``sup_s g_inv(t, alpha, xi, s)``.

    Requires ``alpha > 1/2`` so that the envelope bound applies with a
    strictly decreasing tail.
    """
    if not alpha > 0.5:
        raise ValueError(f"alpha must be > 1/2, got {alpha!r}")
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t!r}")
    xi = _check_xi(xi)
    return _v_envelope_bound(t * xi, alpha)


# --------------------------------------------------------------------------
# Direct evaluators (used as brute-force oracles)
# --------------------------------------------------------------------------


def g_cayley(n: int, p: float, xi: float, s: float) -> float:
    """``((xi-1)^2+s)^n / ((xi+1)^2+s)^(n+2p+1)``."""
    num = (xi - 1.0) ** 2 + s
    den = (xi + 1.0) ** 2 + s
    if num == 0.0:
        return 0.0
    return math.exp(n * math.log(num) - (n + 2.0 * p + 1.0) * math.log(den))


def g_exp(n: int, alpha: float, omega: float, c: float, xi: float, s: float) -> float:
    """``((xi-w+c)^2+s)^n / ((xi+w+c)^2+s)^(n+alpha+1)``."""
    num = (xi - omega + c) ** 2 + s
    den = (xi + omega + c) ** 2 + s
    if num == 0.0:
        return 0.0
    return math.exp(n * math.log(num) - (n + alpha + 1.0) * math.log(den))


def g_inv(t: float, alpha: float, xi: float, s: float) -> float:
    """``exp(-t xi/(xi^2+s)) / (((xi+1)^2+s)^alpha sqrt(xi^2+s))``."""
    tau = xi * xi + s
    den = (xi + 1.0) ** 2 + s
    return math.exp(-t * xi / tau - alpha * math.log(den) - 0.5 * math.log(tau))


def h_inv(t: float, p: float, xi: float, s: float) -> float:
    """``exp(-t xi/(xi^2+s)) sqrt(xi^2+s) / ((xi+1)^2+s)^(p+1)``."""
    tau = xi * xi + s
    den = (xi + 1.0) ** 2 + s
    return math.exp(-t * xi / tau + 0.5 * math.log(tau) - (p + 1.0) * math.log(den))


# --------------------------------------------------------------------------
# Endpoint domination over the omega bracket
# --------------------------------------------------------------------------


def phi_ratio(zeta: float, s: float, omega: float) -> float:
    """``((zeta-w)^2+s) / ((zeta+w)^2+s)``."""
    return ((zeta - omega) ** 2 + s) / ((zeta + omega) ** 2 + s)


def omega_monotone_check(zeta: float, s: float, omega_p: float, omega_q: float,
                         grid_points: int = 2001) -> bool:
    """Does ``phi(omega_p)`` dominate ``phi`` on all of ``[omega_p, omega_q]``?

    True exactly when ``zeta^2 + s >= omega_p * omega_q`` (hence, uniformly
    in ``s``, when ``zeta^2 >= omega_p * omega_q``); verified here by a
    dense scan rather than by the algebraic criterion.
    """
    if not (0.0 < omega_p <= omega_q):
        raise ValueError(f"need 0 < omega_p <= omega_q, got {omega_p!r}, {omega_q!r}")
    if not zeta > 0.0:
        raise ValueError(f"zeta must be > 0, got {zeta!r}")
    if not s >= 0.0:
        raise ValueError(f"s must be >= 0, got {s!r}")
    ws = np.linspace(omega_p, omega_q, grid_points)
    vals = ((zeta - ws) ** 2 + s) / ((zeta + ws) ** 2 + s)
    ref = vals[0]
    return bool(np.all(vals <= ref * (1.0 + 1e-9) + 1e-300))
