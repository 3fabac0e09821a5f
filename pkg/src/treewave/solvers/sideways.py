"""Sideways (space-marching) wave solver on a single edge.

The wave equation u_tt - u_xx + q u = 0 is integrated in x from known value
and derivative traces at the far endpoint toward x = 0, along characteristics
of the Riemann invariants w+- = u_t +- u_x:

    (d_t - d_x) w+ = -q u + S,      (d_t + d_x) w- = -q u + S.

The sideways problem is well posed only inside the light cone, so the output
window shrinks by the edge length: traces at x=0 are reliable on [0, T - l].

The internal variant carries analytic wavefronts (delta coefficient c and
trailing jump j of the *value* trace) as moving line sources
S = -q(x) a1(x) H(t - T_f(x)), which is exactly the residual the front jets
leave behind; the marched field is then the continuous remainder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import HorizonTooShort
from ..potential import PotentialProfile
from ..sampling import SampledFunction, derivative_samples
from ..tree import Edge


@dataclass(frozen=True)
class Front:
    """One wavefront of the value trace, parameterized at the near end x=0.

    ``tau`` is the time it crosses x=0, ``c`` its delta coefficient, ``j`` the
    jump of the value trace right behind it at x=0. ``down`` fronts move
    toward x=0 (cross station x at tau - x), ``up`` fronts away (tau + x).
    """

    tau: float
    c: float
    j: float
    down: bool


def _march(dt: float, n_x: int, q_mid: np.ndarray, qint_mid: np.ndarray,
           u: np.ndarray, ut: np.ndarray, ux: np.ndarray,
           fronts: tuple[Front, ...] = ()):
    """March (u, u_t, u_x) from x = n_x*dt to x = 0. Returns (u, ux, n_valid)."""
    h = dt
    n = len(u)
    wp = ut + ux
    wm = ut - ux
    u = u.copy()
    t = dt * np.arange(n)
    down = [f for f in fronts if f.down]
    up = [f for f in fronts if not f.down]
    for s in range(n_x, 0, -1):
        x_mid = (s - 0.5) * h
        q = q_mid[s - 1]
        ux_old = 0.5 * (wp - wm)
        u_pred = u - h * ux_old

        # source term sum_f -q * a1_f(x_mid) * H(t_eval - T_f(x_mid))
        src_p = np.zeros(n)
        src_m = np.zeros(n)
        for f in down:
            a1 = f.j + 0.5 * f.c * qint_mid[s - 1]
            tf = f.tau - x_mid
            if q != 0.0 and (a1 != 0.0 or f.c != 0.0):
                arg_p = (t - 0.5 * h) - tf
                arg_m = (t + 0.5 * h) - tf
                src_p -= q * a1 * _heaviside(arg_p, h)
                src_m -= q * a1 * _heaviside(arg_m, h)
        for f in up:
            a1 = f.j - 0.5 * f.c * qint_mid[s - 1]
            tf = f.tau + x_mid
            if q != 0.0 and (a1 != 0.0 or f.c != 0.0):
                arg_p = (t - 0.5 * h) - tf
                arg_m = (t + 0.5 * h) - tf
                src_p -= q * a1 * _heaviside(arg_p, h)
                src_m -= q * a1 * _heaviside(arg_m, h)

        wp_new = np.empty(n)
        wp_new[1:] = wp[:-1] - h * q * 0.5 * (u[:-1] + u_pred[1:]) + h * src_p[1:]
        wp_new[0] = 0.0
        wm_new = np.empty(n)
        wm_new[:-1] = wm[1:] + h * q * 0.5 * (u[1:] + u_pred[:-1]) - h * src_m[:-1]
        wm_new[-1] = wm_new[-2] if n > 1 else 0.0  # beyond the valid cone anyway
        ux_new = 0.5 * (wp_new - wm_new)
        u = u - 0.5 * h * (ux_old + ux_new)
        wp, wm = wp_new, wm_new
    n_valid = n - n_x
    return u, 0.5 * (wp - wm), n_valid


def _heaviside(arg: np.ndarray, h: float) -> np.ndarray:
    tol = 1e-9 * h
    return np.where(arg > tol, 1.0, np.where(arg < -tol, 0.0, 0.5))


def _grids(q: PotentialProfile, length: float, dt: float):
    n_x = max(1, round(length / dt))
    xm = (np.arange(n_x) + 0.5) * dt
    q_mid = np.asarray(q(np.minimum(xm, length)), dtype=float)
    qint_mid = np.array([q.integral(0.0, x) for x in xm])
    return n_x, q_mid, qint_mid


def march_edge(length: float, q: PotentialProfile, far_value: np.ndarray,
               far_ut: np.ndarray, far_ux: np.ndarray, dt: float,
               fronts: tuple[Front, ...] = ()):
    """Internal entry point: all data in the edge-local frame (x=0 = near end)."""
    n_x, q_mid, qint_mid = _grids(q, length, dt)
    return _march(dt, n_x, q_mid, qint_mid,
                  np.asarray(far_value, dtype=float),
                  np.asarray(far_ut, dtype=float),
                  np.asarray(far_ux, dtype=float), fronts)


def sideways_wave(edge: Edge, far_value: SampledFunction, far_deriv: SampledFunction,
                  T: float) -> tuple[SampledFunction, SampledFunction, float]:
    """Recover value and outward-derivative traces at the x=0 endpoint from
    traces at the x=l endpoint (far_deriv in the outward convention).

    Returns (near_value, near_deriv, t_valid); samples past t_valid are not
    reliable (domain of dependence) and are zeroed.
    """
    if T < edge.length:
        raise HorizonTooShort(f"horizon {T} shorter than edge length {edge.length}")
    dt = far_value.dt
    n = min(far_value.n, far_deriv.n, round(T / dt) + 1)
    ut = derivative_samples(SampledFunction(dt, far_value.values[:n])).values
    ux = -far_deriv.values[:n]  # outward at x=l is -u_x
    u0, ux0, n_valid = march_edge(edge.length, edge.q, far_value.values[:n], ut, ux, dt)
    if n_valid <= 0:
        raise HorizonTooShort(f"horizon {T} shorter than edge length {edge.length}")
    u0[n_valid:] = 0.0
    ux0[n_valid:] = 0.0
    return (SampledFunction(dt, u0), SampledFunction(dt, ux0), (n_valid - 1) * dt)
