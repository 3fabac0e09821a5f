"""Stationary forward data: Titchmarsh-Weyl matrices and Dirichlet spectral
data synthesized from a known tree.

The tree-wide linear system has two unknowns per edge, (u(0), u'(0)) in the
edge's local coordinate. Rows: boundary values, continuity at internal
vertices, and flux balance (sum of outward derivatives). The TW matrix entry
M_ij is the outward derivative at gamma_j of the solution that is 1 at
gamma_i and 0 at the other boundary vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ClusterUnresolved, SpectrumHit
from .solvers.ode import edge_matrix
from .tree import MetricTree

COND_LIMIT = 1e10


@dataclass
class TWMatrix:
    labels: tuple[str, ...]
    lam: np.ndarray
    data: np.ndarray                 # (n_lam, m, m) complex
    excluded: dict[int, str] = field(default_factory=dict)

    def entry(self, a: str, b: str) -> np.ndarray:
        return self.data[:, self.labels.index(a), self.labels.index(b)]


@dataclass
class SpectralData:
    boundary: tuple[str, ...]
    eigenvalues: np.ndarray
    alpha: np.ndarray                # (K, m): outward derivative / sqrt(lam)


class _System:
    """Assembled boundary-value system at one spectral parameter."""

    def __init__(self, tree: MetricTree, lam, tol=1e-10):
        self.tree = tree
        self.lam = lam
        n = len(tree.edges)
        dtype = complex if isinstance(lam, complex) else float
        self.T = {e.id: edge_matrix(e, lam, tol) for e in tree.edges}
        self.col = {e.id: 2 * k for k, e in enumerate(tree.edges)}
        A = np.zeros((2 * n, 2 * n), dtype=dtype)
        rows_boundary: dict[str, int] = {}
        r = 0
        for gamma in tree.boundary:
            e = tree.incidence()[gamma][0]
            c = self.col[e.id]
            if gamma == e.ends[0]:
                A[r, c] = 1.0
            else:
                A[r, c:c + 2] = self.T[e.id][0]
            rows_boundary[gamma] = r
            r += 1
        for v in tree.internal_vertices():
            inc = tree.incidence()[v]
            vals, ders = [], []
            for e in inc:
                c = self.col[e.id]
                row_val = np.zeros(2 * n, dtype=dtype)
                row_der = np.zeros(2 * n, dtype=dtype)
                if v == e.ends[0]:
                    row_val[c] = 1.0
                    row_der[c + 1] = 1.0            # outward = +u'(0)
                else:
                    row_val[c:c + 2] = self.T[e.id][0]
                    row_der[c:c + 2] = -self.T[e.id][1]   # outward = -u'(l)
                vals.append(row_val)
                ders.append(row_der)
            for j in range(1, len(vals)):
                A[r] = vals[0] - vals[j]
                r += 1
            A[r] = np.sum(ders, axis=0)
            r += 1
        self.A = A
        self.rows_boundary = rows_boundary

    def solve_boundary_values(self, zeta: dict[str, float]) -> np.ndarray:
        b = np.zeros(self.A.shape[0], dtype=self.A.dtype)
        for gamma, val in zeta.items():
            b[self.rows_boundary[gamma]] = val
        cond = np.linalg.cond(self.A)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SpectrumHit(f"system singular at lambda={self.lam} (cond={cond:.2e})")
        return np.linalg.solve(self.A, b)

    def outward_derivative(self, x: np.ndarray, gamma: str):
        e = self.tree.incidence()[gamma][0]
        c = self.col[e.id]
        if gamma == e.ends[0]:
            return x[c + 1]
        return -(self.T[e.id][1] @ x[c:c + 2])

    def normalized_sigma_min(self) -> float:
        norms = np.maximum(np.linalg.norm(self.A, axis=1), 1e-300)
        return float(np.linalg.svd(self.A / norms[:, None], compute_uv=False)[-1])

    def normalized_det(self) -> float:
        norms = np.maximum(np.linalg.norm(self.A, axis=1), 1e-300)
        sign, logdet = np.linalg.slogdet(self.A / norms[:, None])
        return float(sign * np.exp(logdet))


def tw_matrix(tree: MetricTree, lam, reduced: bool = True, tol: float = 1e-10) -> np.ndarray:
    """TW matrix at one lambda; reduced form drops the root row/column."""
    labels = tree.boundary[:-1] if reduced else tree.boundary
    sys_ = _System(tree, lam, tol)
    m = len(labels)
    out = np.zeros((m, m), dtype=complex)
    for i, gi in enumerate(labels):
        x = sys_.solve_boundary_values({g: (1.0 if g == gi else 0.0) for g in tree.boundary})
        for j, gj in enumerate(labels):
            out[i, j] = sys_.outward_derivative(x, gj)
    return out


def tw_matrix_grid(tree: MetricTree, lams, reduced: bool = True, tol: float = 1e-10) -> TWMatrix:
    labels = tree.boundary[:-1] if reduced else tree.boundary
    lams = np.asarray(lams)
    data = np.zeros((len(lams), len(labels), len(labels)), dtype=complex)
    excluded: dict[int, str] = {}
    for k, lam in enumerate(lams):
        lv = complex(lam) if np.iscomplexobj(lams) else float(lam)
        try:
            data[k] = tw_matrix(tree, lv, reduced, tol)
        except SpectrumHit as exc:
            excluded[k] = str(exc)
    return TWMatrix(tuple(labels), lams, data, excluded)


def real_lambda_grid(tree: MetricTree, n: int = 16, lo: float = -8.0, hi: float = -0.25,
                     det_floor: float = 1e-6) -> np.ndarray:
    """Real grid with eigenvalue avoidance by the determinant magnitude test."""
    lams = np.linspace(lo, hi, n)
    out = []
    for lam in lams:
        lamv = float(lam)
        for _ in range(8):
            if abs(_System(tree, lamv).normalized_det()) > det_floor:
                break
            lamv += 0.37 * (hi - lo) / max(n, 1) * 0.1
        out.append(lamv)
    return np.array(out)


def dirichlet_spectrum(tree: MetricTree, lam_max: float, tol: float = 1e-10,
                       scan_points_per_pi: int = 8, n_quad: int = 64) -> SpectralData:
    """All Dirichlet eigenvalues <= lam_max with boundary derivative data.

    Sign scan + bisection on the (row-normalized) characteristic determinant,
    augmented with a smallest-singular-value dip scan so even-multiplicity
    eigenvalues (no sign change) are found too.
    """
    L = tree.total_length()
    qmin = min(float(np.min(e.q(np.linspace(0, e.length, 16)))) for e in tree.edges)
    s_hi = float(np.sqrt(max(lam_max - min(qmin, 0.0), 1e-6)))
    ds = np.pi / (scan_points_per_pi * L)
    s_grid = np.arange(ds * 0.25, s_hi + ds, ds)
    lam_of = lambda s: s * s + min(qmin, 0.0)

    dets = np.array([_System(tree, lam_of(s)).normalized_det() for s in s_grid])
    sigs = np.array([_System(tree, lam_of(s)).normalized_sigma_min() for s in s_grid])

    candidates: list[float] = []
    for k in range(len(s_grid) - 1):
        if dets[k] == 0.0:
            candidates.append(lam_of(s_grid[k]))
        elif dets[k] * dets[k + 1] < 0:
            s_root = brentq(lambda s: _System(tree, lam_of(s)).normalized_det(),
                            s_grid[k], s_grid[k + 1], xtol=1e-13, rtol=1e-15)
            candidates.append(lam_of(s_root))
    # sigma-min dips catch even multiplicities
    for k in range(1, len(s_grid) - 1):
        if sigs[k] < sigs[k - 1] and sigs[k] < sigs[k + 1] and sigs[k] < 1e-2:
            res = minimize_scalar(lambda s: _System(tree, lam_of(s)).normalized_sigma_min(),
                                  bracket=None, bounds=(s_grid[k - 1], s_grid[k + 1]),
                                  method="bounded", options={"xatol": 1e-12})
            if res.fun < 1e-7:
                candidates.append(lam_of(float(res.x)))

    eigs: list[float] = []
    for lam in sorted(candidates):
        if lam > lam_max + 1e-9:
            continue
        if eigs and abs(lam - eigs[-1]) < 1e-7 * max(1.0, abs(lam)):
            continue
        eigs.append(lam)

    boundary = tree.boundary
    rows: list[np.ndarray] = []
    lam_out: list[float] = []
    for lam in eigs:
        sys_ = _System(tree, lam, tol)
        norms = np.maximum(np.linalg.norm(sys_.A, axis=1), 1e-300)
        _, s, vt = np.linalg.svd(sys_.A / norms[:, None])
        null_mask = s < 1e-6
        mult = int(np.sum(null_mask))
        if mult == 0:
            raise ClusterUnresolved(f"candidate {lam} did not resolve to a null vector")
        basis = vt[-mult:][::-1]
        vecs = _l2_orthonormalize(tree, lam, basis, tol, n_quad)
        for x in vecs:
            kappa = np.array([np.real(sys_.outward_derivative(x, g)) for g in boundary])
            k0 = kappa[np.argmax(np.abs(kappa))]
            if k0 < 0:
                kappa, x = -kappa, -x
            if lam <= 0:
                raise ClusterUnresolved(f"eigenvalue {lam} <= 0; alpha undefined on this fixture set")
            rows.append(kappa / np.sqrt(lam))
            lam_out.append(lam)
    order = np.argsort(lam_out, kind="stable")
    return SpectralData(boundary, np.array(lam_out)[order],
                        np.array(rows)[order] if rows else np.zeros((0, len(boundary))))


def _edge_samples(tree, lam, x, edge, n_quad):
    """Eigenfunction samples on one edge from its (u(0), u'(0)) coefficients,
    marched piece-exactly through the quadrature grid."""
    from .solvers.ode import piece_matrix

    c = 2 * [e.id for e in tree.edges].index(edge.id)
    xs = np.linspace(0.0, edge.length, n_quad)
    vals = np.empty_like(xs)
    state = np.array([np.real(x[c]), np.real(x[c + 1])])
    vals[0] = state[0]
    for i in range(1, len(xs)):
        h = xs[i] - xs[i - 1]
        qm = float(edge.q(0.5 * (xs[i] + xs[i - 1])))
        state = piece_matrix(qm - lam, h) @ state
        vals[i] = state[0]
    return xs, vals


def _l2_orthonormalize(tree, lam, basis, tol, n_quad):
    """Gram-Schmidt in L2(tree); returns coefficient vectors of unit-norm,
    mutually orthogonal eigenfunctions."""
    fine = max(n_quad, 128)

    def samples(vec):
        return [_edge_samples(tree, lam, vec, e, fine) for e in tree.edges]

    def inner(sa, sb):
        return sum(np.trapezoid(va * vb, xa) for (xa, va), (_, vb) in zip(sa, sb))

    kept_vecs: list[np.ndarray] = []
    kept_samp = []
    for vec in basis:
        w = np.real(vec).copy()
        sw = samples(w)
        for u, su in zip(kept_vecs, kept_samp):
            coef = inner(sw, su)
            w = w - coef * u
            sw = [(x, vw - coef * vu) for (x, vw), (_, vu) in zip(sw, su)]
        nrm = np.sqrt(max(inner(sw, sw), 0.0))
        if nrm > 1e-8:
            kept_vecs.append(w / nrm)
            kept_samp.append([(x, v / nrm) for x, v in sw])
    return kept_vecs
