"""Transfer of Schrodinger Cauchy data along one edge.

Solves -u'' + q u = lam u, i.e. u'' = (q - lam) u, propagating (u, u') in the
edge's local coordinate. For zero/constant/piecewise potentials the exact
2x2 piece matrices are used (entire in lam, unit determinant); sampled
potentials go through DOP853 at the requested tolerance.

Derivatives here are always d/dx in the local coordinate; callers convert
to/from the global outward convention at the endpoints.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import StepFailure
from ..tree import Edge


class CauchyPair(NamedTuple):
    u: complex
    du: complex


def _cs(s, h):
    """cosh(w h), sinh(w h)/w, w sinh(w h) for w = sqrt(s); stable near s=0."""
    z = s * h * h
    if abs(z) < 1e-10:
        # series in z keeps unit determinant to machine accuracy
        c = 1 + z / 2 + z * z / 24
        sh = h * (1 + z / 6 + z * z / 120)
        ws = s * sh
        return c, sh, ws
    w = np.sqrt(complex(s)) if (isinstance(s, complex) or s < 0) else np.sqrt(s)
    c = np.cosh(w * h)
    sh = np.sinh(w * h) / w
    ws = w * np.sinh(w * h)
    if not isinstance(s, complex) and not isinstance(c, complex):
        return c, sh, ws
    if isinstance(s, complex):
        return c, sh, ws
    return c.real, sh.real, ws.real


def piece_matrix(s, h):
    """Transfer matrix of u'' = s*u over a piece of length h (det = 1)."""
    c, sh, ws = _cs(s, h)
    dtype = complex if isinstance(c, complex) else float
    return np.array([[c, sh], [ws, c]], dtype=dtype)


def edge_matrix(edge: Edge, lam, tol: float = 1e-10):
    """Transfer matrix from x=0 to x=length. Exact for piecewise potentials."""
    pieces = edge.q.pieces(edge.length)
    if pieces is not None:
        dtype = complex if isinstance(lam, complex) else float
        T = np.eye(2, dtype=dtype)
        for x0, x1, q in pieces:
            T = piece_matrix(q - lam, x1 - x0) @ T
        return T
    cols = [_integrate_sampled(edge, lam, (1.0, 0.0), tol),
            _integrate_sampled(edge, lam, (0.0, 1.0), tol)]
    return np.column_stack(cols)


def _integrate_sampled(edge: Edge, lam, init, tol):
    is_complex = isinstance(lam, complex) or any(isinstance(v, complex) for v in init)

    def rhs(x, y):
        q = float(edge.q(x))
        if is_complex:
            u = y[0] + 1j * y[1]
            du = y[2] + 1j * y[3]
            dd = (q - lam) * u
            return [du.real, du.imag, dd.real, dd.imag]
        return [y[1], (q - lam) * y[0]]

    if is_complex:
        y0 = [np.real(init[0]), np.imag(init[0]), np.real(init[1]), np.imag(init[1])]
    else:
        y0 = [float(init[0]), float(init[1])]
    sol = solve_ivp(rhs, (0.0, edge.length), y0, method="DOP853",
                    rtol=tol, atol=tol * 1e-2, dense_output=False)
    if not sol.success:
        raise StepFailure(f"DOP853 failed on edge {edge.id!r}: {sol.message}")
    y = sol.y[:, -1]
    if is_complex:
        return np.array([y[0] + 1j * y[1], y[2] + 1j * y[3]])
    return np.array([y[0], y[1]])


def schrodinger_transfer(edge: Edge, lam, frm, init: CauchyPair, tol: float = 1e-10) -> CauchyPair:
    """Propagate local Cauchy data from endpoint `frm` (0 or 'l'/edge.length)
    to the other endpoint. Local error per step <= tol (exact for piecewise q)."""
    from_zero = frm in (0, 0.0, "0")
    if edge.q.pieces(edge.length) is not None:
        T = edge_matrix(edge, lam, tol)
        if not from_zero:
            # det = 1, so the inverse is the adjugate: exactly reversible
            T = np.array([[T[1, 1], -T[0, 1]], [-T[1, 0], T[0, 0]]], dtype=T.dtype)
        u, du = T @ np.array([init.u, init.du])
        return CauchyPair(u, du)
    if from_zero:
        u, du = _integrate_sampled(edge, lam, (init.u, init.du), tol)
        return CauchyPair(u, du)
    # integrate in the reversed coordinate y = l - x (flips the derivative sign)
    rev = Edge(id=edge.id, ends=edge.ends[::-1], length=edge.length,
               q=edge.q.reversed(edge.length))
    u, du = _integrate_sampled(rev, lam, (init.u, -init.du), tol)
    return CauchyPair(u, -du)
