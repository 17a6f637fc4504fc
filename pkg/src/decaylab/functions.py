"""Holomorphic function families on the right half-plane.

Five parametric families are provided, all built from Cayley-quotient powers
or the inverse-generator exponential:

* ``CayleyPower(n, p)``:      ``f(z) = (z-1)^n / (z+1)^(n+2p)``
* ``CayleyShifted(n, a, c)``: ``f(z) = (z-1+c)^n / (z+1+c)^(n+a)``
* ``VariableCayley``:         ``f(z) = (z+w_p+c)^(-a) * prod_k (z-w_k+c)/(z+w_k+c)``
* ``InverseGen(t, a)``:       ``f(z) = z e^(-t/z) / (z+1)^(a+1)``
* ``InverseGenPoly(t, p)``:   ``f(z) = z e^(-t/z) / (z+1)^(2p+1)``

The interesting parameter regimes push ``n`` (or ``t``) to 1e4 and beyond,
where plain complex arithmetic overflows or underflows long before the
magnitudes of the functions themselves become extreme.  All evaluations are
therefore carried out additively on logarithms: ``eval_log_magnitude`` and
``derivative_log_magnitude`` return ``log |f|`` directly (``-inf`` at zeros),
and ``evaluate`` / ``eval_derivative`` exponentiate a complex log-linear
combination, which keeps every intermediate quantity of moderate size.

Domain: all evaluators accept points with ``Re z >= 0``, excluding genuine
singularities (``z = 0`` for the inverse-generator families).  Points with
``Re z < 0`` raise ``ValueError``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import singledispatch
from typing import Union

import numpy as np

__all__ = [
    "ComplexValue",
    "CayleyPower",
    "CayleyShifted",
    "VariableCayley",
    "InverseGen",
    "InverseGenPoly",
    "Family",
    "eval_log_magnitude",
    "evaluate",
    "eval_derivative",
    "derivative_log_magnitude",
    "derivative_log_magnitude_line",
]


@dataclass(frozen=True)
class ComplexValue:
    """A finite complex number carried as an explicit (re, im) pair."""

    re: float
    im: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"components must be finite, got {self.re!r}, {self.im!r}")

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexValue":
        return cls(float(z.real), float(z.imag))

    def as_complex(self) -> complex:
        return complex(self.re, self.im)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")
    return value


def _nonnegative(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value >= 0.0):
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def _positive_int(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class CayleyPower:
    """``(z-1)^n / (z+1)^(n+2p)`` with integer ``n >= 1`` and ``p > 0``."""

    n: int
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", _positive_int("n", self.n))
        object.__setattr__(self, "p", _positive("p", self.p))


@dataclass(frozen=True)
class CayleyShifted:
    """``(z-1+c)^n / (z+1+c)^(n+alpha)`` with ``n >= 1``, ``alpha >= 0``, ``c > 0``."""

    n: int
    alpha: float
    c: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", _positive_int("n", self.n))
        object.__setattr__(self, "alpha", _nonnegative("alpha", self.alpha))
        object.__setattr__(self, "c", _positive("c", self.c))


@dataclass(frozen=True)
class VariableCayley:
    """``(z+omega_p+c)^(-alpha) * prod_k (z-omega_k+c)/(z+omega_k+c)``.

    ``omega_p`` is a positive lower bracket for the factors: every
    ``omega_k`` must satisfy ``omega_k >= omega_p``.  The shift ``c`` may be
    zero (the pure product) or positive.
    """

    omegas: tuple
    alpha: float
    omega_p: float
    c: float

    def __post_init__(self) -> None:
        omegas = tuple(float(w) for w in self.omegas)
        if not omegas:
            raise ValueError("omegas must be non-empty")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "alpha", _nonnegative("alpha", self.alpha))
        object.__setattr__(self, "omega_p", _positive("omega_p", self.omega_p))
        object.__setattr__(self, "c", _nonnegative("c", self.c))
        if any(not math.isfinite(w) or w < self.omega_p for w in omegas):
            raise ValueError(
                f"every omega must be finite and >= omega_p={self.omega_p}, got {omegas!r}"
            )

    @property
    def n(self) -> int:
        return len(self.omegas)

    @property
    def omega_q(self) -> float:
        return max(self.omegas)


@dataclass(frozen=True)
class InverseGen:
    """``z e^(-t/z) / (z+1)^(alpha+1)`` with ``t > 0`` and ``alpha >= 0``."""

    t: float
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", _positive("t", self.t))
        object.__setattr__(self, "alpha", _nonnegative("alpha", self.alpha))


@dataclass(frozen=True)
class InverseGenPoly:
    """``z e^(-t/z) / (z+1)^(2p+1)`` with ``t > 0`` and ``p > 0``."""

    t: float
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", _positive("t", self.t))
        object.__setattr__(self, "p", _positive("p", self.p))


Family = Union[CayleyPower, CayleyShifted, VariableCayley, InverseGen, InverseGenPoly]

_INVERSE_FAMILIES = (InverseGen, InverseGenPoly)


def _as_point(family, z) -> complex:
    """Coerce and validate an evaluation point for ``family``."""
    if isinstance(z, ComplexValue):
        z = z.as_complex()
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"evaluation point must be finite, got {z!r}")
    if z.real < 0.0:
        raise ValueError(f"evaluation point must have Re z >= 0, got {z!r}")
    if z == 0 and isinstance(family, _INVERSE_FAMILIES):
        raise ValueError("z = 0 is an essential singularity of this family")
    return z


def _log_abs_terms(terms) -> float:
    """``sum(e * log|w|)`` over ``(w, e)`` pairs, with zero bases handled.

    A zero base with positive exponent yields ``-inf`` (the product
    vanishes); zero exponents are skipped so that ``0^0`` contributes 1.
    """
    total = 0.0
    for w, e in terms:
        if e == 0.0:
            continue
        a = abs(w)
        if a == 0.0:
            return -math.inf
        total += e * math.log(a)
    return total


def _exp_log_product(terms, prefactor: complex = 1.0 + 0j) -> complex:
    """``prefactor * prod w^e`` computed as ``exp(sum e Log w)``.

    Principal branches throughout; bases with ``Re w > 0`` (all non-integer
    exponents used by the families) make the branch choice exact.
    """
    if prefactor == 0:
        return 0j
    total = 0j
    for w, e in terms:
        if e == 0.0:
            continue
        if w == 0:
            if e > 0:
                return 0j
            raise ZeroDivisionError("pole hit during evaluation")
        total += e * cmath.log(w)
    return prefactor * cmath.exp(total)


# --------------------------------------------------------------------------
# log |f|
# --------------------------------------------------------------------------


@singledispatch
def eval_log_magnitude(family, z) -> float:
    """``log |f(z)|`` for a family member, ``-inf`` where ``f`` vanishes."""
    raise TypeError(f"unsupported family: {family!r}")


@eval_log_magnitude.register
def _(family: CayleyPower, z) -> float:
    z = _as_point(family, z)
    n, p = family.n, family.p
    return _log_abs_terms([(z - 1.0, n), (z + 1.0, -(n + 2.0 * p))])


@eval_log_magnitude.register
def _(family: CayleyShifted, z) -> float:
    z = _as_point(family, z)
    n, a, c = family.n, family.alpha, family.c
    return _log_abs_terms([(z - 1.0 + c, n), (z + 1.0 + c, -(n + a))])


@eval_log_magnitude.register
def _(family: VariableCayley, z) -> float:
    z = _as_point(family, z)
    a, wp, c = family.alpha, family.omega_p, family.c
    terms = [(z + wp + c, -a)]
    terms.extend((z - w + c, 1.0) for w in family.omegas)
    terms.extend((z + w + c, -1.0) for w in family.omegas)
    return _log_abs_terms(terms)


def _inverse_gen_log_magnitude(z: complex, t: float, a: float) -> float:
    # |e^(-t/z)| = exp(-t Re(1/z)).
    re_inv = z.real / (z.real * z.real + z.imag * z.imag)
    return _log_abs_terms([(z, 1.0), (z + 1.0, -(a + 1.0))]) - t * re_inv


@eval_log_magnitude.register
def _(family: InverseGen, z) -> float:
    z = _as_point(family, z)
    return _inverse_gen_log_magnitude(z, family.t, family.alpha)


@eval_log_magnitude.register
def _(family: InverseGenPoly, z) -> float:
    z = _as_point(family, z)
    return _inverse_gen_log_magnitude(z, family.t, 2.0 * family.p)


# --------------------------------------------------------------------------
# f(z)
# --------------------------------------------------------------------------


@singledispatch
def evaluate(family, z) -> complex:
    """The complex value ``f(z)``."""
    raise TypeError(f"unsupported family: {family!r}")


@evaluate.register
def _(family: CayleyPower, z) -> complex:
    z = _as_point(family, z)
    n, p = family.n, family.p
    return _exp_log_product([(z - 1.0, n), (z + 1.0, -(n + 2.0 * p))])


@evaluate.register
def _(family: CayleyShifted, z) -> complex:
    z = _as_point(family, z)
    n, a, c = family.n, family.alpha, family.c
    return _exp_log_product([(z - 1.0 + c, n), (z + 1.0 + c, -(n + a))])


@evaluate.register
def _(family: VariableCayley, z) -> complex:
    z = _as_point(family, z)
    a, wp, c = family.alpha, family.omega_p, family.c
    terms = [(z + wp + c, -a)]
    terms.extend((z - w + c, 1.0) for w in family.omegas)
    terms.extend((z + w + c, -1.0) for w in family.omegas)
    return _exp_log_product(terms)


def _inverse_gen_value(z: complex, t: float, a: float) -> complex:
    return _exp_log_product([(z, 1.0), (z + 1.0, -(a + 1.0))]) * cmath.exp(-t / z)


@evaluate.register
def _(family: InverseGen, z) -> complex:
    z = _as_point(family, z)
    return _inverse_gen_value(z, family.t, family.alpha)


@evaluate.register
def _(family: InverseGenPoly, z) -> complex:
    z = _as_point(family, z)
    return _inverse_gen_value(z, family.t, 2.0 * family.p)


# --------------------------------------------------------------------------
# f'(z)
# --------------------------------------------------------------------------


@singledispatch
def eval_derivative(family, z) -> complex:
    """The complex derivative ``f'(z)``, from closed forms."""
    raise TypeError(f"unsupported family: {family!r}")


@eval_derivative.register
def _(family: CayleyPower, z) -> complex:
    # f' = (z-1)^(n-1) (2n - 2p(z-1)) / (z+1)^(n+2p+1)
    z = _as_point(family, z)
    n, p = family.n, family.p
    bracket = 2.0 * n - 2.0 * p * (z - 1.0)
    return _exp_log_product(
        [(z - 1.0, n - 1), (z + 1.0, -(n + 2.0 * p + 1.0))], prefactor=bracket
    )


@eval_derivative.register
def _(family: CayleyShifted, z) -> complex:
    # f' = (u-1)^(n-1) (2n - alpha(u-1)) / (u+1)^(n+alpha+1),  u = z + c
    z = _as_point(family, z)
    n, a, c = family.n, family.alpha, family.c
    u = z + c
    bracket = 2.0 * n - a * (u - 1.0)
    return _exp_log_product(
        [(u - 1.0, n - 1), (u + 1.0, -(n + a + 1.0))], prefactor=bracket
    )


@eval_derivative.register
def _(family: VariableCayley, z) -> complex:
    # Away from factor zeros:
    #   f'/f = -alpha/(z+w_p+c) + sum_k 2 w_k / ((z-w_k+c)(z+w_k+c)).
    # With exactly one vanishing factor only its derivative survives; with
    # two or more the derivative vanishes.
    z = _as_point(family, z)
    a, wp, c = family.alpha, family.omega_p, family.c
    zeros = [k for k, w in enumerate(family.omegas) if z - w + c == 0]
    if len(zeros) >= 2:
        return 0j
    if len(zeros) == 1:
        k0 = zeros[0]
        w0 = family.omegas[k0]
        terms = [(z + wp + c, -a), (z + w0 + c, -2.0)]
        for k, w in enumerate(family.omegas):
            if k == k0:
                continue
            terms.append((z - w + c, 1.0))
            terms.append((z + w + c, -1.0))
        return _exp_log_product(terms, prefactor=2.0 * w0)
    logderiv = -a / (z + wp + c)
    for w in family.omegas:
        logderiv += 2.0 * w / ((z - w + c) * (z + w + c))
    return evaluate(family, z) * logderiv


def _inverse_gen_derivative(z: complex, t: float, a: float) -> complex:
    # f' = e^(-t/z) (t(z+1)/z + 1 - alpha z) / (z+1)^(alpha+2)
    bracket = t * (z + 1.0) / z + 1.0 - a * z
    return (
        _exp_log_product([(z + 1.0, -(a + 2.0))], prefactor=bracket)
        * cmath.exp(-t / z)
    )


@eval_derivative.register
def _(family: InverseGen, z) -> complex:
    z = _as_point(family, z)
    return _inverse_gen_derivative(z, family.t, family.alpha)


@eval_derivative.register
def _(family: InverseGenPoly, z) -> complex:
    z = _as_point(family, z)
    return _inverse_gen_derivative(z, family.t, 2.0 * family.p)


# --------------------------------------------------------------------------
# log |f'|
# --------------------------------------------------------------------------


@singledispatch
def derivative_log_magnitude(family, z) -> float:
    """``log |f'(z)|``, ``-inf`` where the derivative vanishes."""
    raise TypeError(f"unsupported family: {family!r}")


@derivative_log_magnitude.register
def _(family: CayleyPower, z) -> float:
    z = _as_point(family, z)
    n, p = family.n, family.p
    bracket = 2.0 * n - 2.0 * p * (z - 1.0)
    return _log_abs_terms(
        [(z - 1.0, n - 1), (z + 1.0, -(n + 2.0 * p + 1.0)), (bracket, 1.0)]
    )


@derivative_log_magnitude.register
def _(family: CayleyShifted, z) -> float:
    z = _as_point(family, z)
    n, a, c = family.n, family.alpha, family.c
    u = z + c
    bracket = 2.0 * n - a * (u - 1.0)
    return _log_abs_terms(
        [(u - 1.0, n - 1), (u + 1.0, -(n + a + 1.0)), (bracket, 1.0)]
    )


@derivative_log_magnitude.register
def _(family: VariableCayley, z) -> float:
    z = _as_point(family, z)
    a, wp, c = family.alpha, family.omega_p, family.c
    zeros = [k for k, w in enumerate(family.omegas) if z - w + c == 0]
    if len(zeros) >= 2:
        return -math.inf
    if len(zeros) == 1:
        k0 = zeros[0]
        w0 = family.omegas[k0]
        terms = [(z + wp + c, -a), (z + w0 + c, -2.0), (2.0 * w0, 1.0)]
        for k, w in enumerate(family.omegas):
            if k == k0:
                continue
            terms.append((z - w + c, 1.0))
            terms.append((z + w + c, -1.0))
        return _log_abs_terms(terms)
    logderiv = -a / (z + wp + c)
    for w in family.omegas:
        logderiv += 2.0 * w / ((z - w + c) * (z + w + c))
    return eval_log_magnitude(family, z) + _log_abs_terms([(logderiv, 1.0)])


def _inverse_gen_derivative_log_magnitude(z: complex, t: float, a: float) -> float:
    re_inv = z.real / (z.real * z.real + z.imag * z.imag)
    bracket = t * (z + 1.0) / z + 1.0 - a * z
    return (
        _log_abs_terms([(z + 1.0, -(a + 2.0)), (bracket, 1.0)]) - t * re_inv
    )


@derivative_log_magnitude.register
def _(family: InverseGen, z) -> float:
    z = _as_point(family, z)
    return _inverse_gen_derivative_log_magnitude(z, family.t, family.alpha)


@derivative_log_magnitude.register
def _(family: InverseGenPoly, z) -> float:
    z = _as_point(family, z)
    return _inverse_gen_derivative_log_magnitude(z, family.t, 2.0 * family.p)


# --------------------------------------------------------------------------
# log |f'| along a vertical line (vectorized over the imaginary part)
# --------------------------------------------------------------------------


def _safe_log(arr: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(arr)


@singledispatch
def derivative_log_magnitude_line(family, xi: float, etas) -> np.ndarray:
    """``log |f'(xi + i eta)]`` for an array of ``eta`` values.

    The vertical-line profile is what the boundary-norm integrals maximize
    over, so this path is vectorized.  ``xi`` must be positive.
    """
    raise TypeError(f"unsupported family: {family!r}")


def _line_points(xi: float, etas) -> np.ndarray:
    xi = float(xi)
    if not (math.isfinite(xi) and xi > 0.0):
        raise ValueError(f"xi must be finite and > 0, got {xi!r}")
    etas = np.asarray(etas, dtype=float)
    return etas


@derivative_log_magnitude_line.register
def _(family: CayleyPower, xi: float, etas) -> np.ndarray:
    etas = _line_points(xi, etas)
    n, p = family.n, family.p
    s = etas * etas
    num = (xi - 1.0) ** 2 + s
    den = (xi + 1.0) ** 2 + s
    br = (2.0 * n - 2.0 * p * (xi - 1.0)) ** 2 + (2.0 * p * etas) ** 2
    out = -0.5 * (n + 2.0 * p + 1.0) * _safe_log(den) + 0.5 * _safe_log(br)
    if n != 1:
        out = out + 0.5 * (n - 1.0) * _safe_log(num)
    return out


@derivative_log_magnitude_line.register
def _(family: CayleyShifted, xi: float, etas) -> np.ndarray:
    etas = _line_points(xi, etas)
    n, a, c = family.n, family.alpha, family.c
    u = xi + c
    s = etas * etas
    num = (u - 1.0) ** 2 + s
    den = (u + 1.0) ** 2 + s
    br = (2.0 * n - a * (u - 1.0)) ** 2 + (a * etas) ** 2
    out = -0.5 * (n + a + 1.0) * _safe_log(den) + 0.5 * _safe_log(br)
    if n != 1:
        out = out + 0.5 * (n - 1.0) * _safe_log(num)
    return out


@derivative_log_magnitude_line.register
def _(family: VariableCayley, xi: float, etas) -> np.ndarray:
    etas = _line_points(xi, etas)
    a, wp, c = family.alpha, family.omega_p, family.c
    z = xi + 1j * etas
    s = etas * etas
    logmag = -0.5 * a * _safe_log((xi + wp + c) ** 2 + s)
    logderiv = -a / (z + wp + c)
    singular = np.zeros(etas.shape, dtype=bool)
    for w in family.omegas:
        num = (xi - w + c) ** 2 + s
        den = (xi + w + c) ** 2 + s
        logmag = logmag + 0.5 * (_safe_log(num) - _safe_log(den))
        prod = num * den
        singular |= prod == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            logderiv = logderiv + 2.0 * w / ((z - w + c) * (z + w + c))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = logmag + _safe_log(np.abs(logderiv))
    if np.any(singular):
        # A vanishing factor makes the product form 0 * inf; recompute the
        # affected entries with the scalar zero-aware path.
        out = np.array(out, copy=True)
        for i in np.nonzero(singular)[0]:
            out[i] = derivative_log_magnitude(family, complex(xi, etas[i]))
    return out


def _inverse_gen_line(xi: float, etas: np.ndarray, t: float, a: float) -> np.ndarray:
    s = etas * etas
    r2 = xi * xi + s
    den = (xi + 1.0) ** 2 + s
    z = xi + 1j * etas
    bracket = t * (z + 1.0) / z + 1.0 - a * z
    with np.errstate(divide="ignore"):
        return (
            -t * xi / r2
            - 0.5 * (a + 2.0) * _safe_log(den)
            + _safe_log(np.abs(bracket))
        )


@derivative_log_magnitude_line.register
def _(family: InverseGen, xi: float, etas) -> np.ndarray:
    etas = _line_points(xi, etas)
    return _inverse_gen_line(xi, etas, family.t, family.alpha)


@derivative_log_magnitude_line.register
def _(family: InverseGenPoly, xi: float, etas) -> np.ndarray:
    etas = _line_points(xi, etas)
    return _inverse_gen_line(xi, etas, family.t, 2.0 * family.p)
