"""Independent oracles used by the test suite.

Everything here is deliberately dumb and self-contained (brute force,
closed forms, exact arithmetic) so it cannot share a bug with the library
code paths it checks.
"""

from __future__ import annotations

import cmath
from fractions import Fraction


def bfs_path_length(edges, a, b):
    """Brute-force unweighted BFS, then sum lengths along the found path.

    edges: list of (v1, v2, length).
    """
    adj = {}
    for v1, v2, l in edges:
        adj.setdefault(v1, []).append((v2, l))
        adj.setdefault(v2, []).append((v1, l))
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for v in frontier:
            for w, _ in adj[v]:
                if w not in prev:
                    prev[w] = v
                    nxt.append(w)
        frontier = nxt
    total = 0.0
    v = b
    while prev[v] is not None:
        p = prev[v]
        total += next(l for w, l in adj[v] if w == p)
        v = p
    return total


def exhaustive_sheaves(edges, boundary, root):
    """All internal vertices whose incident edges are all-but-one edges to
    non-root boundary vertices; returns {vertex: sorted member tuple}."""
    adj = {}
    for eid, v1, v2 in edges:
        adj.setdefault(v1, []).append((eid, v2))
        adj.setdefault(v2, []).append((eid, v1))
    nrb = set(boundary) - {root}
    out = {}
    for v, inc in adj.items():
        if v in boundary:
            continue
        members = [w for _, w in inc if w in nrb]
        if len(inc) - len(members) == 1 and members:
            out[v] = tuple(sorted(members))
    return out


# --- closed forms for the interval and the 3-star ---------------------------

def interval_tw(lam, l):
    """Reduced-free 2x2 TW matrix of a single q=0 edge (outward convention):
    M11 = -w cot(w l), M12 = w / sin(w l), w = sqrt(lam)."""
    w = cmath.sqrt(complex(lam))
    m11 = -w / cmath.tan(w * l)
    m12 = w / cmath.sin(w * l)
    return m11, m12


def interval_tw_const_q(lam, l, q):
    w = cmath.sqrt(complex(lam - q))
    return -w / cmath.tan(w * l), w / cmath.sin(w * l)


def star3_tw(lam, lengths):
    """Full 3x3 TW matrix of a q=0 3-star by the explicit solve used in the
    analysis: per-edge u_i = V C(x) + D_i S(x) from the center."""
    w = cmath.sqrt(complex(lam))

    def C(x):
        return cmath.cos(w * x)

    def S(x):
        return cmath.sin(w * x) / w if w != 0 else x

    def dC(x):
        return -w * cmath.sin(w * x)

    def dS(x):
        return cmath.cos(w * x)

    m = [[0j] * 3 for _ in range(3)]
    for i in range(3):
        li = lengths[i]
        others = [j for j in range(3) if j != i]
        K = sum(C(lengths[j]) / S(lengths[j]) for j in others)
        V = 1.0 / (C(li) + K * S(li))
        D = {i: V * K}
        for j in others:
            D[j] = -V * C(lengths[j]) / S(lengths[j])
        for j in range(3):
            lj = lengths[j]
            if j == i:
                m[i][j] = -(V * dC(li) + D[i] * dS(li))
            else:
                m[i][j] = -(V * dC(lj) + D[j] * dS(lj))
    return m


# --- exact train algebra ------------------------------------------------------

def product_train(phi_zeta, psi_kappa):
    """Brute-force merged product {(zeta+kappa, phi*psi)}; exact if inputs are
    Fractions. Zero-coefficient collisions are kept out of the result."""
    acc = {}
    for zeta, phi in phi_zeta:
        for kappa, psi in psi_kappa:
            t = zeta + kappa
            acc[t] = acc.get(t, 0) + phi * psi
    return sorted((t, c) for t, c in acc.items() if c != 0)


def frac(x) -> Fraction:
    return Fraction(x).limit_denominator(10**12)


# --- smooth test pulse ---------------------------------------------------------

def bump(t, t0, width):
    """C^2 bump supported on [t0, t0+width], unit mass."""
    import numpy as np

    s = (np.asarray(t) - t0) / width
    v = np.where((s > 0) & (s < 1), s**3 * (1 - s) ** 3, 0.0)
    return v * (140.0 / width)
