"""Pure-numpy implementations of the hot kernels.

Same call signatures as the compiled extension `treewave._kernels`; the
`treewave.kernels` facade picks whichever is available. Both lanes must
produce results that agree to rounding error (asserted in the test suite).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def run_leapfrog(n_steps, n_nodes, qdt2, interior, vtx_first, vtx_nb_ptr, vtx_nb_idx,
                 vtx_nodes_ptr, vtx_nodes_idx, vtx_invdeg, vtx_qsum_dt2,
                 bnd_stencil, stencil_w, controls, store_fields=False):
    """Magic-step (dt == dx) leapfrog on a tree of 1-D segments.

    Node layout: edges occupy contiguous node spans; each vertex is duplicated
    into every incident edge's endpoint node and kept in sync by the vertex
    update. `interior` indexes non-endpoint nodes (neighbors are index +-1).
    Outward-derivative traces use the one-sided stencil `stencil_w` applied to
    the nodes `bnd_stencil` (shape (n_boundary, len(stencil_w))).

    Returns (deriv_traces, value_traces, fields) where traces have shape
    (n_boundary, n_steps+1) and fields is the full (n_steps+1, n_nodes)
    history when store_fields is set (else None).
    """
    u_prev = np.zeros(n_nodes)
    u_curr = np.zeros(n_nodes)
    n_bnd = bnd_stencil.shape[0]
    bnd_nodes = bnd_stencil[:, 0]
    deriv = np.zeros((n_bnd, n_steps + 1))
    value = np.zeros((n_bnd, n_steps + 1))
    fields = np.zeros((n_steps + 1, n_nodes)) if store_fields else None
    n_vtx = len(vtx_first)
    counts = np.diff(vtx_nodes_ptr)
    for m in range(1, n_steps + 1):
        u_new = np.empty(n_nodes)
        u_new[interior] = (u_curr[interior + 1] + u_curr[interior - 1]
                           - u_prev[interior] - qdt2[interior] * u_curr[interior])
        if n_vtx:
            sums = np.add.reduceat(u_curr[vtx_nb_idx], vtx_nb_ptr[:-1])
            uv = (2.0 * vtx_invdeg * sums - u_prev[vtx_first]
                  - vtx_invdeg * vtx_qsum_dt2 * u_curr[vtx_first])
            u_new[vtx_nodes_idx] = np.repeat(uv, counts)
        u_new[bnd_nodes] = controls[:, m]
        deriv[:, m] = u_new[bnd_stencil] @ stencil_w
        value[:, m] = u_new[bnd_nodes]
        if store_fields:
            fields[m] = u_new
        u_prev, u_curr = u_curr, u_new
    return deriv, value, fields


def volterra_march(B, ashift, psi1, shift_slots, shift_coeffs, dt, start_slot):
    """Second-kind Volterra march:

        psi1*r[k] + dt*trapz_{j<=k}(r_j * ashift_{k-j}) + sum_i c_i r[k - s_i] = B[k]

    with r = 0 before start_slot. ashift[m] holds the convolution kernel at
    lag m*dt; its m=0 sample multiplies the implicit node.
    """
    n = len(B)
    r = np.zeros(n)
    arev = ashift[::-1].copy()
    a0 = ashift[0]
    n_sh = len(shift_slots)
    for k in range(max(start_slot, 0), n):
        if k == 0:
            known = 0.0
            denom = psi1
        else:
            known = 0.5 * r[0] * ashift[k] + np.dot(r[1:k], arev[n - k:n - 1])
            denom = psi1 + 0.5 * dt * a0
        acc = B[k] - dt * known
        for i in range(n_sh):
            s = k - shift_slots[i]
            if s >= 0:
                acc -= shift_coeffs[i] * r[s]
        r[k] = acc / denom
    return r
