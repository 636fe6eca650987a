"""Generalized trigonometric functions of the model planes of curvature kappa.

``sn``, ``cs`` and ``md`` solve ``f'' + kappa f = 0`` (``md`` is the
antiderivative of ``sn``).  All functions accept Python scalars or numpy
arrays; scalars in give floats out.  Near ``kappa * x**2 == 0`` the closed
forms ``sin(sqrt(k) x) / sqrt(k)`` degenerate to ``0/0``, so a truncated
power series is used there instead.
"""

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "SERIES_THRESHOLD",
    "SERIES_TERMS",
    "sn",
    "cs",
    "md",
    "sn_inverse",
    "model_diameter",
    "within_diameter",
]

SERIES_THRESHOLD = 1e-8
SERIES_TERMS = 8

# Taylor coefficients in t = kappa * x**2, highest order first for Horner.
_SN_COEFFS = tuple((-1) ** n / math.factorial(2 * n + 1) for n in reversed(range(SERIES_TERMS)))
_CS_COEFFS = tuple((-1) ** n / math.factorial(2 * n) for n in reversed(range(SERIES_TERMS)))
# arcsin(y) / y as a series in y**2 (equivalently arcsinh with y**2 -> -y**2)
_ASN_COEFFS = tuple(
    math.factorial(2 * n) / (4**n * math.factorial(n) ** 2 * (2 * n + 1))
    for n in reversed(range(SERIES_TERMS))
)


def _is_scalar(*args):
    for a in args:
        if not isinstance(a, (int, float)) or isinstance(a, bool):
            return False
    return True


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _horner(coeffs, t):
    acc = 0.0
    for c in coeffs:
        acc = acc * t + c
    return acc


def sn(kappa, x):
    """Generalized sine ``sn_kappa(x)``.

    Equals ``sin(sqrt(kappa) x)/sqrt(kappa)``, ``x`` or
    ``sinh(sqrt(-kappa) x)/sqrt(-kappa)`` according to the sign of kappa.
    """
    if _is_scalar(kappa, x):
        kappa, x = float(kappa), float(x)
        t = kappa * x * x
        if abs(t) < SERIES_THRESHOLD:
            return x * _horner(_SN_COEFFS, t)
        if kappa > 0:
            r = math.sqrt(kappa)
            return math.sin(r * x) / r
        r = math.sqrt(-kappa)
        return math.sinh(r * x) / r
    if _is_scalar(kappa):
        return _out(_sn_fixed(float(kappa), np.asarray(x, float)))

    kappa, x = np.broadcast_arrays(np.asarray(kappa, float), np.asarray(x, float))
    t = kappa * x * x
    small = np.abs(t) < SERIES_THRESHOLD
    r = np.sqrt(np.abs(kappa))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        closed = np.where(kappa > 0, np.sin(r * x), np.sinh(r * x)) / r
    return _out(np.where(small, x * _horner(_SN_COEFFS, t), closed))


def _sn_fixed(kappa, x):
    """Array ``sn`` for one scalar kappa."""
    if kappa == 0.0:
        return x.copy()
    t = kappa * x * x
    r = math.sqrt(abs(kappa))
    closed = (np.sin(r * x) if kappa > 0 else np.sinh(r * x)) / r
    small = np.abs(t) < SERIES_THRESHOLD
    if np.any(small):
        closed = np.where(small, x * _horner(_SN_COEFFS, t), closed)
    return closed


def cs(kappa, x):
    """Generalized cosine ``cs_kappa(x)``; the derivative of :func:`sn`."""
    if _is_scalar(kappa, x):
        kappa, x = float(kappa), float(x)
        t = kappa * x * x
        if abs(t) < SERIES_THRESHOLD:
            return _horner(_CS_COEFFS, t)
        if kappa > 0:
            return math.cos(math.sqrt(kappa) * x)
        return math.cosh(math.sqrt(-kappa) * x)

    kappa, x = np.broadcast_arrays(np.asarray(kappa, float), np.asarray(x, float))
    t = kappa * x * x
    small = np.abs(t) < SERIES_THRESHOLD
    r = np.sqrt(np.abs(kappa))
    with np.errstate(over="ignore"):
        closed = np.where(kappa > 0, np.cos(r * x), np.cosh(r * x))
    return _out(np.where(small, _horner(_CS_COEFFS, t), closed))


def md(kappa, x):
    """Modified distance ``md_kappa(x) = 2 sn_kappa(x/2)**2`` for ``x >= 0``.

    The ``sn`` form is used rather than ``(1 - cs)/kappa`` because it needs
    no division by kappa.

    Raises
    ------
    DomainError
        If ``x`` is negative.
    """
    if _is_scalar(kappa, x):
        if x < 0:
            raise DomainError(f"md is defined for x >= 0, got {x!r}")
        s = sn(kappa, 0.5 * x)
        return 2.0 * s * s
    x = np.asarray(x, float)
    if np.any(x < 0):
        raise DomainError("md is defined for x >= 0")
    s = sn(kappa, 0.5 * x)
    return _out(2.0 * s * s)


def sn_inverse(kappa, s):
    """Inverse of ``sn_kappa`` on ``[0, D_kappa / 2]`` for ``s >= 0``.

    For ``kappa > 0`` the argument must satisfy ``sqrt(kappa) * s <= 1``;
    values marginally above are clamped, callers are responsible for
    rejecting larger excursions.
    """
    if _is_scalar(kappa, s):
        kappa, s = float(kappa), float(s)
        t = kappa * s * s
        if abs(t) < SERIES_THRESHOLD:
            return s * _horner(_ASN_COEFFS, t)
        if kappa > 0:
            r = math.sqrt(kappa)
            return math.asin(min(r * s, 1.0)) / r
        r = math.sqrt(-kappa)
        return math.asinh(r * s) / r

    kappa, s = np.broadcast_arrays(np.asarray(kappa, float), np.asarray(s, float))
    t = kappa * s * s
    small = np.abs(t) < SERIES_THRESHOLD
    r = np.sqrt(np.abs(kappa))
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = np.where(kappa > 0, np.arcsin(np.minimum(r * s, 1.0)), np.arcsinh(r * s)) / r
    return _out(np.where(small, s * _horner(_ASN_COEFFS, t), closed))


def model_diameter(kappa):
    """Diameter of the model plane: ``pi / sqrt(kappa)`` or ``math.inf``.

    ``math.inf`` is the unbounded sentinel; compare lengths against it with
    :func:`within_diameter` rather than by arithmetic.
    """
    if kappa > 0:
        return math.pi / math.sqrt(kappa)
    return math.inf


def within_diameter(kappa, length, strict=True):
    """True when ``length`` is below (or, non-strict, at most) ``D_kappa``."""
    if kappa <= 0:
        return True
    d = model_diameter(kappa)
    return length < d if strict else length <= d
