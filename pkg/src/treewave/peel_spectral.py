"""Spectral leaf peeling: recalculate the reduced TW matrix for the tree
with one sheaf removed, using only the matrix samples and the sheaf's known
lengths and potentials.

Per lambda: solve the member-edge Cauchy problems toward the sheaf vertex
(the paper's outward derivatives become u_x(l_i) = -M_1i in edge-local
coordinates), combine continuity and flux balance at the vertex, then

    M~_00 = du0/u0,        M~_0j = M_1j / u0,
    M~_i0 = du0_i - u0_i * M~_00,
    M~_ij = M_ij  - u0_i * M~_0j,

with du0 the derivative outward the new boundary vertex into the stem.
Samples where u0 vanishes are flagged and excluded (PeelSingularity) rather
than perturbed; row/column formulas are both evaluated and cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyFailure, PeelSingularity
from .forward import TWMatrix
from .solvers.ode import CauchyPair, schrodinger_transfer
from .tree import Edge, Sheaf

SINGULARITY_TOL = 1e-8
CONSISTENCY_TOL = 1e-6


@dataclass
class SpectralVertexTrace:
    lam: complex
    u0: complex
    du0: complex       # outward from the new boundary vertex, into the stem
    residual: float


def _member_edges(sheaf: Sheaf) -> list[Edge]:
    return [Edge(id=f"sheaf:{eid}", ends=(sheaf.vertex, m), length=l, q=q)
            for eid, m, l, q in zip(sheaf.edges, sheaf.members,
                                    sheaf.lengths, sheaf.potentials)]


def sheaf_vertex_trace(sheaf: Sheaf, values, out_derivs, lam, tol: float = 1e-10,
                       check: bool = True) -> SpectralVertexTrace:
    """Transport per-member Cauchy data (value, outward derivative at the
    member's boundary vertex) to the sheaf vertex.

    Continuity demands every member edge deliver the same vertex value; the
    max deviation is reported (and enforced when check=True). The returned
    derivative is re-oriented outward the new boundary vertex (flux balance).
    """
    u0s, flux = [], 0.0
    for edge, v, d in zip(_member_edges(sheaf), values, out_derivs):
        init = CauchyPair(v, -d)  # outward at x=l is -u_x
        out = schrodinger_transfer(edge, lam, edge.length, init, tol)
        u0s.append(out.u)
        flux = flux + out.du      # +u_x(0) is outward from the vertex
    scale = max(1.0, max(abs(u) for u in u0s))
    residual = max(abs(u - u0s[0]) for u in u0s) / scale
    if check and residual > CONSISTENCY_TOL:
        raise ConsistencyFailure(
            f"sheaf continuity residual {residual:.2e} at lambda={lam} "
            "(wrong sheaf data or wrong matrix row)")
    return SpectralVertexTrace(lam=lam, u0=u0s[0], du0=-flux, residual=residual)


def vertex_trace_spectral(sheaf: Sheaf, row, lam, tol: float = 1e-10) -> SpectralVertexTrace:
    """Trace of the solution driven at the sheaf's first member: boundary
    value 1 there, 0 at the other members; `row` holds M_1i for i = members
    (including M_11 first)."""
    values = [1.0] + [0.0] * (sheaf.size - 1)
    return sheaf_vertex_trace(sheaf, values, list(row), lam, tol)


def peel_tw_at(M_at_lam: np.ndarray, labels, sheaf: Sheaf, lam, tol: float = 1e-10):
    """One lambda sample of the peeled reduced TW matrix. Raises
    PeelSingularity when the sheaf-driven solution vanishes at the vertex."""
    labels = list(labels)
    mem = [labels.index(g) for g in sheaf.members]
    surv = [j for j in range(len(labels)) if j not in mem]
    i1 = mem[0]

    tr1 = vertex_trace_spectral(sheaf, [M_at_lam[i1, k] for k in mem], lam, tol)
    V, W = tr1.u0, tr1.du0
    if abs(V) < SINGULARITY_TOL * max(1.0, abs(W)):
        raise PeelSingularity(
            f"u(0, lambda) = {V:.2e} at lambda={lam}: Dirichlet eigenvalue of the sheaf subtree")

    m_new = len(surv) + 1
    out = np.zeros((m_new, m_new), dtype=complex)
    out[0, 0] = W / V
    for col, j in enumerate(surv, start=1):
        out[0, col] = M_at_lam[i1, j] / V

    sym_residual = 0.0
    for rw, i in enumerate(surv, start=1):
        tri = sheaf_vertex_trace(sheaf, [0.0] * sheaf.size,
                                 [M_at_lam[i, k] for k in mem], lam, tol)
        out[rw, 0] = tri.du0 - tri.u0 * out[0, 0]
        for col, j in enumerate(surv, start=1):
            out[rw, col] = M_at_lam[i, j] - tri.u0 * out[0, col]
        sym_residual = max(sym_residual,
                           abs(out[rw, 0] - out[0, rw]) / max(1.0, abs(out[0, rw])))

    # reindex from vertex-first to the peeled tree's boundary order (the
    # sheaf vertex takes the first removed slot)
    built = [sheaf.vertex] + [labels[j] for j in surv]
    new_labels = peeled_boundary(labels, sheaf)
    perm = [built.index(g) for g in new_labels]
    out = out[np.ix_(perm, perm)]
    return out, tuple(new_labels), max(tr1.residual, sym_residual)


def peeled_boundary(labels, sheaf: Sheaf) -> list[str]:
    """Boundary order after the peel: sheaf vertex in the first removed slot,
    surviving order preserved (matches tree.peel)."""
    labels = list(labels)
    first_slot = min(labels.index(m) for m in sheaf.members)
    out = []
    for i, g in enumerate(labels):
        if g in sheaf.members:
            if i == first_slot:
                out.append(sheaf.vertex)
        else:
            out.append(g)
    return out


def peel_tw(M: TWMatrix, sheaf: Sheaf, tol: float = 1e-10) -> TWMatrix:
    """Peeled reduced TW matrix on the same lambda grid; singular samples are
    flagged in `excluded` and left zero."""
    first = None
    data = None
    excluded = dict(M.excluded)
    diagnostics = 0.0
    for k in range(len(M.lam)):
        if k in excluded:
            continue
        lam = M.lam[k]
        lam = complex(lam) if np.iscomplexobj(M.lam) else float(lam)
        try:
            out, labels, resid = peel_tw_at(M.data[k], M.labels, sheaf, lam, tol)
        except PeelSingularity as exc:
            excluded[k] = str(exc)
            continue
        diagnostics = max(diagnostics, resid)
        if data is None:
            first = labels
            data = np.zeros((len(M.lam), len(labels), len(labels)), dtype=complex)
        data[k] = out
    if data is None:
        raise PeelSingularity("every lambda sample hit a sheaf-subtree eigenvalue")
    return TWMatrix(first, M.lam, data, excluded)
