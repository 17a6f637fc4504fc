"""Diagonal (normal) spectral models and exact operator norms on them.

Every model here is a normal operator given by its point spectrum
``{lambda_k}`` in the open right half-plane, so ``||F(A)|| = sup_k |F(lambda_k)|``
for any bounded function ``F`` of the operator.  That turns operator-norm
experiments into explicit maxima over the spectrum, with truncation ``K``
as the only approximation.

Deterministic parameter randomness uses the splitmix64 generator so that
sequences are reproducible across platforms and processes from a single
integer seed.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, fields

import numpy as np

from .quadrature import integrate_adaptive

__all__ = [
    "ParamSeq",
    "SpectrumModel",
    "SweepResult",
    "cayley_product_norm",
    "cayley_product_sweep",
    "frac_normalize_residual",
    "fractional_power_norm",
    "inverse_gen_norm",
    "make_poly_stable_spectrum",
    "make_sqrt_spectrum",
    "plancherel_check",
    "semigroup_norm",
    "splitmix64_floats",
    "splitmix64_values",
    "weighted_resolvent_sup",
]

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64_values(seed, count):
    """First ``count`` raw 64-bit outputs of splitmix64 for ``seed``."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def splitmix64_floats(seed, count):
    """``count`` doubles in [0, 1) derived from the top 53 bits."""
    return (splitmix64_values(seed, count) >> np.uint64(11)).astype(
        np.float64
    ) * 2.0**-53


@dataclass(frozen=True)
class ParamSeq:
    """A reproducible sequence of parameters uniform on ``[lo, hi]``."""

    seed: int
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi >= self.lo:
            raise ValueError(f"need hi >= lo, got [{self.lo}, {self.hi}]")

    def values(self, count):
        return self.lo + (self.hi - self.lo) * splitmix64_floats(self.seed, count)


_META_FIELDS = ("label", "beta", "c", "c_im", "delta", "C")


@dataclass(eq=False)
class SpectrumModel:
    """Point spectrum ``re + i*im`` of a normal operator, plus metadata.

    All points must lie in the open right half-plane; imaginary parts are
    stored as non-negative representatives (the models are conjugation
    symmetric and every norm used here depends only on ``|im|``).
    """

    re: np.ndarray
    im: np.ndarray
    label: str = ""
    beta: float | None = None
    c: float | None = None
    c_im: float | None = None
    delta: float | None = None
    C: float | None = None

    def __post_init__(self):
        re = np.atleast_1d(np.asarray(self.re, dtype=float))
        im = np.atleast_1d(np.asarray(self.im, dtype=float))
        if re.shape != im.shape or re.ndim != 1:
            raise ValueError("re and im must be equal-length 1-D arrays")
        if not np.all(re > 0.0):
            raise ValueError("spectrum must lie in the open right half-plane")
        if not np.all(im >= 0.0):
            raise ValueError(
                "imaginary parts must be >= 0 (use from_points to fold signs)"
            )
        self.re = re
        self.im = im

    @property
    def K(self):
        return self.re.shape[0]

    @property
    def points(self):
        return self.re + 1j * self.im

    @classmethod
    def from_points(cls, points, **meta):
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        return cls(re=pts.real.copy(), im=np.abs(pts.imag), **meta)

    def to_text(self):
        parts = ["# spectrum", f"label={self.label}"]
        for name in _META_FIELDS[1:]:
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value!r}")
        out = io.StringIO()
        out.write(" ".join(parts) + "\n")
        for r, i in zip(self.re, self.im):
            out.write(f"{r:.17g} {i:.17g}\n")
        return out.getvalue()

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("# spectrum"):
            raise ValueError("not a spectrum text block")
        meta = {}
        for token in lines[0][len("# spectrum") :].split():
            key, _, raw = token.partition("=")
            if key == "label":
                meta[key] = raw
            elif key in _META_FIELDS:
                meta[key] = float(raw)
        data = np.loadtxt(io.StringIO("\n".join(lines[1:])), ndmin=2)
        return cls(re=data[:, 0], im=data[:, 1], **meta)


def make_poly_stable_spectrum(beta, K, c_im=1.0, label="poly-stable"):
    """``lambda_k = k^(-beta) + i*c_im*k``: a bounded semigroup whose decay
    of ``||e^(-tA) A^(-1)||`` is polynomial with exponent ``1/(2+beta)``."""
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    k = np.arange(1, int(K) + 1, dtype=float)
    return SpectrumModel(
        re=k**-beta, im=c_im * k, label=label, beta=float(beta), c_im=float(c_im)
    )


def make_sqrt_spectrum(c, K, label="sqrt-line"):
    """``lambda_k = c + i*sqrt(k)``: constant real part, square-root spacing."""
    if c <= 0.0:
        raise ValueError(f"c must be positive, got {c}")
    k = np.arange(1, int(K) + 1, dtype=float)
    return SpectrumModel(re=np.full(k.shape, float(c)), im=np.sqrt(k), label=label, c=float(c))


# --------------------------------------------------------------------------
# exact norms
# --------------------------------------------------------------------------


def _finish_max(values, return_index):
    idx = int(np.argmax(values))
    value = float(values[idx])
    return (value, idx) if return_index else value


def _log_abs_ratio(pts, omega, shift):
    z = pts + shift
    with np.errstate(divide="ignore"):
        return np.log(np.abs(z - omega)) - np.log(np.abs(z + omega))


def _omega_sequence(omegas, n):
    if isinstance(omegas, ParamSeq):
        return omegas.values(n)
    arr = np.asarray(omegas, dtype=float)
    if arr.ndim == 0:
        return None  # scalar fast path
    if arr.shape[0] < n:
        raise ValueError(f"need at least {n} omegas, got {arr.shape[0]}")
    return arr[:n]


def cayley_product_norm(model, omegas, n, alpha=0.0, shift=0.0, return_index=False):
    """``max_k |lambda_k|^(-alpha) * prod_{j<=n} |r_j(lambda_k)|`` where
    ``r_j(z) = (z - omega_j + shift)/(z + omega_j + shift)``.

    ``omegas`` may be a scalar (all factors equal), a sequence, or a
    :class:`ParamSeq`.  For sweeps over many ``n`` on large models prefer
    :func:`cayley_product_sweep`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    pts = model.points
    base = -alpha * np.log(np.abs(pts)) if alpha else 0.0
    w = _omega_sequence(omegas, n)
    if w is None:
        acc = n * _log_abs_ratio(pts, float(omegas), shift)
    else:
        acc = np.zeros(model.K)
        for om in w:
            acc += _log_abs_ratio(pts, om, shift)
    return _finish_max(np.exp(acc + base), return_index)


def semigroup_norm(model, t, alpha=0.0, return_index=False):
    """``||e^(-tA) A^(-alpha)|| = max_k e^(-t re_k) |lambda_k|^(-alpha)``."""
    logv = -t * model.re
    if alpha:
        logv = logv - alpha * np.log(np.abs(model.points))
    return _finish_max(np.exp(logv), return_index)


def inverse_gen_norm(model, t, alpha=0.0, return_index=False):
    """``||e^(-t A^(-1)) A^(-alpha)||``; uses ``Re(1/lambda) = re/|lambda|^2``."""
    lam2 = model.re**2 + model.im**2
    logv = -t * model.re / lam2
    if alpha:
        logv = logv - 0.5 * alpha * np.log(lam2)
    return _finish_max(np.exp(logv), return_index)


def fractional_power_norm(model, alpha, return_index=False):
    """``||A^(-alpha)|| = max_k |lambda_k|^(-alpha)``."""
    return _finish_max(np.abs(model.points) ** -alpha, return_index)


def frac_normalize_residual(model, alpha, c):
    """Max relative residual of ``(lambda+c)^(-alpha)(1+c/lambda)^alpha``
    against ``lambda^(-alpha)`` over the spectrum (principal branches).

    The arguments of ``lambda``, ``lambda + c`` and ``1 + c/lambda`` all lie
    in ``(-pi/2, pi/2)``, so no branch wrap occurs and the residual is pure
    floating-point noise.
    """
    if c <= 0.0:
        raise ValueError(f"c must be positive, got {c}")
    lam = model.points
    lhs = np.exp(-alpha * (np.log(lam + c) - np.log1p(c / lam)))
    rhs = np.exp(-alpha * np.log(lam))
    return float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))


# --------------------------------------------------------------------------
# Plancherel identity check
# --------------------------------------------------------------------------


def plancherel_check(lam, xi, bq):
    """Numerically verify both sides of the Plancherel identity for the
    scalar orbit ``t -> e^(-(xi+lambda)t) lambda^(-bq)``.

    Returns ``(lhs, rhs, relative_residual)`` where both sides equal
    ``pi |lambda|^(-2 bq) / (xi + Re lambda)`` analytically.
    """
    lam = complex(lam)
    if lam.real <= 0.0:
        raise ValueError(f"lambda must have positive real part, got {lam}")
    if xi <= 0.0:
        raise ValueError(f"xi must be positive, got {xi}")
    w = xi + lam.real
    pref = abs(lam) ** (-2.0 * bq)

    # Frequency side: after shifting the integration variable by Im(lambda),
    # 2 * integral_0^inf pref / (w^2 + u^2) du, split linear + logarithmic.
    near = integrate_adaptive(
        lambda u: pref / (w * w + u * u), 0.0, w, rel_tol=1e-11
    )
    far_hi = 1e11 * w
    far = integrate_adaptive(
        lambda v: (lambda u: pref * u / (w * w + u * u))(math.exp(v)),
        math.log(w),
        math.log(far_hi),
        rel_tol=1e-11,
    )
    lhs = 2.0 * (near.value + far.value) + 2.0 * pref / far_hi

    # Time side: 2 pi pref * integral_0^T e^(-2wt) dt plus an analytic tail.
    T = 15.0 / w
    time_side = integrate_adaptive(
        lambda t: math.exp(-2.0 * w * t), 0.0, T, rel_tol=1e-11
    )
    rhs = 2.0 * math.pi * pref * (time_side.value + math.exp(-2.0 * w * T) / (2.0 * w))

    residual = abs(lhs - rhs) / abs(rhs)
    return lhs, rhs, residual


def weighted_resolvent_sup(model, q, bq, xis=None):
    """``max_xi xi^(1-2q) max_k pi |lambda_k|^(-2 bq) / (xi + re_k)`` over a
    grid of ``xi`` in (0, 1].  Returns ``(value, attaining_xi)``."""
    if xis is None:
        xis = np.geomspace(1e-4, 1.0, 80)
    weight = np.asarray(xis, dtype=float) ** (1.0 - 2.0 * q)
    lam_pow = np.abs(model.points) ** (-2.0 * bq)
    best_val, best_xi = -math.inf, float(xis[0])
    for x, wgt in zip(xis, weight):
        v = wgt * float(np.max(lam_pow * (math.pi / (x + model.re))))
        if v > best_val:
            best_val, best_xi = v, float(x)
    return best_val, best_xi


# --------------------------------------------------------------------------
# product sweeps over n
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepResult:
    """Norm values (and attaining spectral indices) along an ``n`` grid."""

    ns: tuple
    values: np.ndarray
    indices: np.ndarray


_COARSE_POINTS = 2500
_DENSE_LIMIT = 6000


def _coarse_indices(K):
    idx = np.geomspace(1.0, float(K), _COARSE_POINTS)
    return np.unique(np.minimum(idx.astype(int) - 0, K - 1))


def cayley_product_sweep(model, omegas, n_grid, alpha=0.0, shift=0.0):
    """Evaluate :func:`cayley_product_norm` along an increasing ``n`` grid.

    Scalar ``omegas`` evaluates directly.  For variable factor sequences a
    coarse cumulative pass over geometrically thinned spectral indices finds
    the maximising neighbourhoods, which are then re-evaluated exactly, so
    the cost is ``O((coarse + zoom) * max(n))`` instead of ``O(K * max(n))``.
    """
    ns = sorted({int(n) for n in n_grid})
    if not ns or ns[0] < 1:
        raise ValueError("n_grid must contain positive integers")
    n_max = ns[-1]
    pts = model.points
    base = -alpha * np.log(np.abs(pts)) if alpha else np.zeros(model.K)

    w = _omega_sequence(omegas, n_max)
    if w is None:
        logr = _log_abs_ratio(pts, float(omegas), shift)
        values, indices = [], []
        for n in ns:
            idx = int(np.argmax(n * logr + base))
            indices.append(idx)
            values.append(math.exp(n * logr[idx] + base[idx]))
        return SweepResult(tuple(ns), np.array(values), np.array(indices))

    if model.K <= _DENSE_LIMIT:
        cand = np.arange(model.K)
    else:
        coarse = _coarse_indices(model.K)
        acc = np.zeros(coarse.shape[0])
        cpts, cbase = pts[coarse], base[coarse]
        grid_pos = {n: None for n in ns}
        snapshots = {}
        for k, om in enumerate(w, start=1):
            acc += _log_abs_ratio(cpts, om, shift)
            if k in grid_pos:
                snapshots[k] = acc + cbase
        cand_set = set()
        for n in ns:
            vals = snapshots[n]
            order = np.argsort(vals)[::-1]
            picked = 0
            for j in order:
                lo = coarse[j - 1] if j > 0 else 0
                hi = coarse[j + 1] if j + 1 < coarse.shape[0] else model.K - 1
                cand_set.update(range(int(lo), int(hi) + 1))
                picked += 1
                if picked == 3:
                    break
        cand = np.fromiter(sorted(cand_set), dtype=int)

    zpts, zbase = pts[cand], base[cand]
    acc = np.zeros(cand.shape[0])
    values, indices = [], []
    want = set(ns)
    for k, om in enumerate(w, start=1):
        acc += _log_abs_ratio(zpts, om, shift)
        if k in want:
            full = acc + zbase
            j = int(np.argmax(full))
            values.append(math.exp(full[j]))
            indices.append(int(cand[j]))
    return SweepResult(tuple(ns), np.array(values), np.array(indices))
