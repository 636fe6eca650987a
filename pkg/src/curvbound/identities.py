"""Residuals of the trigonometric identities of the model planes.

Every function returns a dict mapping an identity name to an array of
relative residuals ``|lhs - rhs| / max(1, sum of |terms|)``, so a value
near machine epsilon means the identity holds to working precision no
matter how large ``sinh`` or ``cosh`` have grown.  They back the
``trig-identities`` and ``triangle-solvers`` scenarios of the command
line tool.
"""

import math

import numpy as np

from .model import angle_from_sss, side_from_sas
from .trig import cs, md, sn

__all__ = ["relative_residual", "trig_identity_residuals", "triangle_residuals",
           "midpoint_residuals"]


def relative_residual(lhs, rhs, *terms):
    """``|lhs - rhs|`` scaled by ``max(1, |lhs| + |rhs| + sum |terms|)``."""
    lhs = np.asarray(lhs, float)
    rhs = np.asarray(rhs, float)
    scale = np.abs(lhs) + np.abs(rhs)
    for t in terms:
        scale = scale + np.abs(np.asarray(t, float))
    return np.abs(lhs - rhs) / np.maximum(1.0, scale)


def _md(kappa, x):
    # md is even (the integral of an odd function); evaluate on |x|
    return md(kappa, np.abs(np.asarray(x, float)))


def trig_identity_residuals(kappa, x, y):
    """Residuals of the square, addition, double/half-angle and md identities."""
    k = np.asarray(kappa, float)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    snx, csx, sny, csy = sn(k, x), cs(k, x), sn(k, y), cs(k, y)
    mdx, mdy = _md(k, x), _md(k, y)
    sn_h, cs_h = sn(k, 0.5 * x), cs(k, 0.5 * x)
    md_sum, md_diff = _md(k, x + y), _md(k, x - y)
    ss = snx * sny
    sn2 = snx * snx
    cs2 = csx * csx
    out = {
        "squares": relative_residual(cs2 + k * sn2, 1.0, cs2, k * sn2),
        "sn_addition": relative_residual(sn(k, x + y), snx * csy + csx * sny, snx * csy, csx * sny),
        "cs_addition": relative_residual(cs(k, x + y), csx * csy - k * ss, csx * csy, k * ss),
        "sn_double": relative_residual(sn(k, 2 * x), 2 * snx * csx),
        "cs_double": relative_residual(cs(k, 2 * x), cs2 - k * sn2, cs2, k * sn2),
        "cs_double_cs": relative_residual(cs(k, 2 * x), 2 * cs2 - 1.0, 2 * cs2),
        "cs_double_sn": relative_residual(cs(k, 2 * x), 1.0 - 2 * k * sn2, 2 * k * sn2),
        "sn_half": relative_residual(k * sn_h * sn_h, 0.5 * (1.0 - csx), 0.5 * csx),
        "cs_half": relative_residual(cs_h * cs_h, 0.5 * (1.0 + csx), 0.5 * csx),
        "cs_plus_md": relative_residual(csx + k * mdx, 1.0, csx, k * mdx),
        "md_addition": relative_residual(md_sum, md_diff + 2 * ss, md_diff, 2 * ss),
        "md_addition_x": relative_residual(md_sum, mdx + csx * mdy + ss, mdx, csx * mdy, ss),
        "md_addition_y": relative_residual(md_sum, mdx * csy + mdy + ss, mdx * csy, mdy, ss),
        "md_double": relative_residual(_md(k, 2 * x), 2 * sn2),
        "md_double_cs": relative_residual(_md(k, 2 * x), 2 * (1.0 + csx) * mdx, 2 * mdx, 2 * csx * mdx),
    }
    return out


def triangle_residuals(kappa, a, b, gamma):
    """Residuals of the triangle laws on the model triangle given by SAS data.

    The side ``c`` opposite ``gamma`` comes from :func:`side_from_sas`;
    the angles ``alpha`` (opposite ``a``) and ``beta`` (opposite ``b``)
    and a recomputed ``gamma`` come from :func:`angle_from_sss`.  Entries:

    * ``round_trip``: absolute angle error of SAS followed by SSS;
    * ``cosines_sum``, ``cosines_diff``, ``cosines_a``, ``cosines_b``: the
      four ``md`` forms of the law of cosines; ``cosines_cs``: its ``cs``
      form;
    * ``dual_cosines``: the law of cosines for angles;
    * ``sines``: the law of sines;
    * ``angle_sum`` (only for ``kappa == 0``): ``|alpha + beta + gamma - pi|``.
    """
    k = float(kappa)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    gamma = np.asarray(gamma, float)
    c = np.asarray(side_from_sas(k, a, b, gamma), float)
    g2 = np.asarray(angle_from_sss(k, a, b, c), float)
    alpha = np.asarray(angle_from_sss(k, b, c, a), float)
    beta = np.asarray(angle_from_sss(k, a, c, b), float)
    sa, sb = sn(k, a), sn(k, b)
    ca, cb = cs(k, a), cs(k, b)
    mda, mdb, mdc = _md(k, a), _md(k, b), _md(k, c)
    ss = sa * sb
    cg = np.cos(gamma)
    out = {
        "round_trip": np.abs(g2 - gamma),
        "cosines_sum": relative_residual(mdc, _md(k, a + b) - ss * (1 + cg), _md(k, a + b), ss * (1 + cg)),
        "cosines_diff": relative_residual(mdc, _md(k, a - b) + ss * (1 - cg), _md(k, a - b), ss * (1 - cg)),
        "cosines_a": relative_residual(mdc, mda + ca * mdb - ss * cg, mda, ca * mdb, ss * cg),
        "cosines_b": relative_residual(mdc, mda * cb + mdb - ss * cg, mda * cb, mdb, ss * cg),
        "cosines_cs": relative_residual(cs(k, c), ca * cb + k * ss * cg, ca * cb, k * ss * cg),
        "dual_cosines": relative_residual(
            np.cos(g2), np.sin(alpha) * np.sin(beta) * cs(k, c) - np.cos(alpha) * np.cos(beta)),
        "sines": relative_residual(sa * np.sin(beta), sb * np.sin(alpha)),
    }
    if k == 0.0:
        out["angle_sum"] = np.abs(alpha + beta + g2 - math.pi)
    return out


def midpoint_residuals(kappa, a, b, c, l):
    """Residuals of the three forms of the midpoint formula.

    ``l`` is the distance from the midpoint of side ``c`` to the opposite
    vertex.  Forms: ``md`` (``2 cs(c/2) md(l) = md(a) + md(b) - 2 md(c/2)``),
    ``sn`` (the same divided through with ``md = 2 sn^2(./2)``) and ``cs``
    (``2 cs(c/2) cs(l) = cs(a) + cs(b)``, the previous one times kappa).
    """
    k = float(kappa)
    a, b, c, l = (np.asarray(v, float) for v in (a, b, c, l))
    ch = cs(k, 0.5 * c)
    lhs_md = 2 * ch * _md(k, l)
    rhs_terms = (_md(k, a), _md(k, b), 2 * _md(k, 0.5 * c))
    s = lambda v: sn(k, v) ** 2  # noqa: E731
    lhs_sn = 2 * ch * s(0.5 * l)
    sn_terms = (s(0.5 * a), s(0.5 * b), 2 * s(0.25 * c))
    return {
        "md": relative_residual(lhs_md, rhs_terms[0] + rhs_terms[1] - rhs_terms[2], *rhs_terms),
        "sn": relative_residual(lhs_sn, sn_terms[0] + sn_terms[1] - sn_terms[2], *sn_terms),
        "cs": relative_residual(2 * ch * cs(k, l), cs(k, a) + cs(k, b), cs(k, a), cs(k, b)),
    }
