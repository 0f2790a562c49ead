"""Tabulated running integrals over horizontal distance.

Every analytical quantity integrates ``g(z) * z`` over horizontal distance on
one tier. The integrands are smooth in ``log z``, so they are integrated once
on a geometric grid (Gauss-Legendre per panel) and queried through cubic
Hermite interpolation that uses the exact integrand as the derivative.
"""
from __future__ import annotations

import numpy as np

# geometric grid in units of the tier height: 1e-3 H .. 1e6 H
_REL_GRID = np.concatenate([[0.0], np.geomspace(1e-3, 1e6, 401)])
_GL_X, _GL_W = np.polynomial.legendre.leggauss(6)


def tier_grid(height: float):
    """Panel edges, Gauss nodes and weights for a tier at ``height``.

    Returns ``edges (G,)``, ``nodes (G-1, q)``, ``weights (G-1, q)``.
    """
    edges = height * _REL_GRID
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (1.0 + _GL_X[None, :])
    weights = half * _GL_W[None, :]
    return edges, nodes, weights


def hermite(edges, values, slopes, query):
    """Cubic Hermite interpolation of tabulated ``values`` with exact ``slopes``.

    ``values``/``slopes`` have shape ``(..., G)``; ``query`` broadcasts against
    the leading dims with a trailing query axis, shape ``(..., Q)``. Queries
    outside the table are clamped to the end points; callers handle them.
    """
    query = np.asarray(query, dtype=float)
    g = edges.size
    q = np.clip(query, edges[0], edges[-1])
    idx = np.clip(np.searchsorted(edges, q, side="right") - 1, 0, g - 2)
    x0 = edges[idx]
    h = edges[idx + 1] - x0
    t = (q - x0) / h
    lead = np.broadcast_shapes(values.shape[:-1], query.shape[:-1])
    v = np.broadcast_to(values, lead + values.shape[-1:])
    d = np.broadcast_to(slopes, lead + slopes.shape[-1:])
    ib = np.broadcast_to(idx, lead + idx.shape[-1:])
    v0 = np.take_along_axis(v, ib, axis=-1)
    v1 = np.take_along_axis(v, ib + 1, axis=-1)
    d0 = np.take_along_axis(d, ib, axis=-1)
    d1 = np.take_along_axis(d, ib + 1, axis=-1)
    t2 = t * t
    t3 = t2 * t
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + t
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1


def running_from_zero(panel_integrals):
    """Cumulative integral at the panel edges, starting at zero."""
    out = np.zeros(panel_integrals.shape[:-1] + (panel_integrals.shape[-1] + 1,))
    np.cumsum(panel_integrals, axis=-1, out=out[..., 1:])
    return out


def running_to_infinity(panel_integrals, beyond):
    """Integral from each edge to infinity; ``beyond`` is the part past the last edge."""
    rev = np.cumsum(panel_integrals[..., ::-1], axis=-1)[..., ::-1]
    out = np.empty(panel_integrals.shape[:-1] + (panel_integrals.shape[-1] + 1,))
    beyond = np.asarray(beyond, dtype=float)
    out[..., -1] = beyond
    out[..., :-1] = rev + beyond[..., None]
    return out
