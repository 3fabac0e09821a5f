"""Dynamical forward data: singular trains by broken-ray bookkeeping, the
sampled regular parts by mollified time-domain runs, and the Fourier bridge
to the TW matrix.

Ray model (pinned by the Fourier bridge and the d'Alembert oracles): a value
pulse of amplitude c arriving at a grounded boundary vertex contributes
+2c delta' and -c*Q delta to the outward-derivative response there, where Q
is the potential integrated along the whole broken ray; the launch of entry
(i,i) contributes -delta'(t). Vertex factors: transmission 2/n, reflection
2/n - 1, boundary reflection -1.

Rays are coalesced on (edge, direction, arrival slot) states with times
quantized to 1e-9; the moments (sum c, sum c*Q) propagate linearly, so
coincident-path coefficients merge exactly and the branching never explodes.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import NonDecaying, TooManyRays
from .sampling import SampledFunction
from .solvers.timedomain import td_wave_solve
from .trains import DELTA, DPRIME, SingularTrain
from .tree import MetricTree

TIME_QUANTUM = 1e-9


@dataclass
class ResponseEntry:
    train: SingularTrain
    regular: SampledFunction

    def waveform(self, jumps=None, window=None):
        from .trains import Waveform
        return Waveform(self.train, self.regular, jumps,
                        self.regular.horizon if window is None else window)


@dataclass
class ResponseMatrix:
    labels: tuple[str, ...]
    dt: float
    T: float
    entries: dict[tuple[str, str], ResponseEntry]
    window: float
    meta: dict = field(default_factory=dict)

    def entry(self, a: str, b: str) -> ResponseEntry:
        return self.entries[(a, b)]

    @property
    def mollifier_width(self) -> float:
        return self.meta.get("mollifier_width", 0.0)


# --- broken rays ---------------------------------------------------------------


def _slots(x: float) -> int:
    return round(x / TIME_QUANTUM)


def ray_trains(tree: MetricTree, source: str, T: float, eps_coeff: float = 1e-14,
               budget: int = 2_000_000) -> dict[str, SingularTrain]:
    """Singular trains of all entries (source, j) up to time T, one sweep."""
    edges = list(tree.edges)
    e_index = {e.id: k for k, e in enumerate(edges)}
    lam_slots = [_slots(e.length) for e in edges]
    q_int = [e.q.integral(0.0, e.length) for e in edges]
    inc = tree.incidence()
    bset = set(tree.boundary)
    T_slots = _slots(T)
    q_scale = 1.0 + sum(abs(q) for q in q_int)

    pending: dict[tuple[int, int, int], list[float]] = {}
    heap: list[tuple[int, int, int]] = []
    n_states = 0

    def deposit(t_slot: int, e_idx: int, end: int, C: float, D: float):
        nonlocal n_states
        if t_slot > T_slots:
            return
        key = (t_slot, e_idx, end)
        acc = pending.get(key)
        if acc is None:
            n_states += 1
            if n_states > budget:
                raise TooManyRays(f"ray state budget {budget} exceeded at T={T}")
            pending[key] = [C, D]
            heapq.heappush(heap, key)
        else:
            acc[0] += C
            acc[1] += D

    src_edge = inc[source][0]
    k0 = e_index[src_edge.id]
    far_end = 1 if src_edge.ends[0] == source else 0
    deposit(lam_slots[k0], k0, far_end, 1.0, q_int[k0])

    atoms: dict[str, list] = {g: [] for g in tree.boundary}
    atoms[source].append((0.0, -1.0, DPRIME))

    while heap:
        key = heapq.heappop(heap)
        C, D = pending.pop(key)
        t_slot, e_idx, end = key
        if abs(C) < eps_coeff and abs(D) < eps_coeff * q_scale:
            continue
        v = edges[e_idx].ends[end]
        t = t_slot * TIME_QUANTUM
        if v in bset:
            if abs(2 * C) > eps_coeff:
                atoms[v].append((t, 2 * C, DPRIME))
            if abs(D) > eps_coeff * q_scale:
                atoms[v].append((t, -D, DELTA))
            deposit(t_slot + lam_slots[e_idx], e_idx, 1 - end,
                    -C, -D - C * q_int[e_idx])
        else:
            n = len(inc[v])
            refl, trans = 2.0 / n - 1.0, 2.0 / n
            for e2 in inc[v]:
                k2 = e_index[e2.id]
                f = refl if k2 == e_idx else trans
                end2 = 1 if e2.ends[0] == v else 0
                deposit(t_slot + lam_slots[k2], k2, end2, f * C, f * D + f * C * q_int[k2])
    return {g: SingularTrain.of(lst) for g, lst in atoms.items()}


def ray_singular_train(tree: MetricTree, i: str, j: str, T: float,
                       eps_coeff: float = 1e-14, budget: int = 2_000_000) -> SingularTrain:
    return ray_trains(tree, i, T, eps_coeff, budget)[j]


# --- mollifier -------------------------------------------------------------------


def mollifier_bump(t, eps: float):
    """C^2 bump of unit mass supported on [0, eps]."""
    s = np.asarray(t, dtype=float) / eps
    inside = (s > 0) & (s < 1)
    return np.where(inside, 140.0 * s**3 * (1 - s) ** 3, 0.0) / eps


def mollifier_dbump(t, eps: float):
    s = np.asarray(t, dtype=float) / eps
    inside = (s > 0) & (s < 1)
    return np.where(inside, 420.0 * s**2 * (1 - s) ** 2 * (1 - 2 * s), 0.0) / (eps * eps)


def mollifier_cdf(t, eps: float):
    """Integral of the bump: 0 before 0, 1 after eps."""
    s = np.clip(np.asarray(t, dtype=float) / eps, 0.0, 1.0)
    return 140.0 * (s**4 / 4 - 3 * s**5 / 5 + s**6 / 2 - s**7 / 7)


# --- response synthesis ------------------------------------------------------------


def _atom_trace_image(t_grid, dx, eps, tau, c1, c0, launch=False):
    """Outward-derivative trace, under the discrete 5-point stencil, of the
    analytic two-order jet a mollified atom group carries near the vertex.

    Using the same stencil as the solver's trace extraction makes the
    subtraction cancel the singular content exactly for q = 0 (where the
    magic-step field itself is exact)."""
    from .solvers.timedomain import TRACE_STENCIL

    chat, jhat = 0.5 * c1, 0.5 * c0
    acc = np.zeros_like(t_grid)
    for r, w in enumerate(TRACE_STENCIL):
        x = r * dx
        if launch:
            # outgoing control pulse theta(t - x)
            field = -c1 * mollifier_bump(t_grid - tau - x, eps)
        else:
            # incident pulse + its grounded odd image
            field = (chat * (mollifier_bump(t_grid - tau + x, eps)
                             - mollifier_bump(t_grid - tau - x, eps))
                     + jhat * (mollifier_cdf(t_grid - tau + x, eps)
                               - mollifier_cdf(t_grid - tau - x, eps)))
        acc += w * field
    return acc / dx


def response_matrix(tree: MetricTree, T: float, dx: float, mollifier_cells: int = 8,
                    eps_coeff: float = 1e-14, budget: int = 2_000_000) -> ResponseMatrix:
    """Reduced response matrix: exact singular trains by rays; regular parts
    from a mollified-impulse time-domain run with the train's own discrete
    image subtracted. Regular parts are the true ones convolved with the
    mollifier bump (width recorded in meta)."""
    labels = tree.boundary[:-1]
    dt = dx
    n = round(T / dt) + 1
    t_grid = dt * np.arange(n)
    eps = mollifier_cells * dx
    theta = SampledFunction(dt, mollifier_bump(t_grid, eps))
    entries: dict[tuple[str, str], ResponseEntry] = {}
    for gi in labels:
        trains = ray_trains(tree, gi, T, eps_coeff, budget)
        out = td_wave_solve(tree, {gi: theta}, T=T, dx=dx)
        for gj in labels:
            train = trains[gj]
            groups: dict[float, list[float]] = {}
            for beta, c, order in train:
                g = groups.setdefault(float(beta), [0.0, 0.0])
                g[1 - order] = float(c)     # [c1, c0]
            reg = out.deriv[gj].values.copy()
            for tau, (c1, c0) in groups.items():
                reg -= _atom_trace_image(t_grid, dx, eps, tau, c1, c0,
                                         launch=(tau == 0.0 and gi == gj))
            entries[(gi, gj)] = ResponseEntry(train, SampledFunction(dt, reg))
    return ResponseMatrix(labels=tuple(labels), dt=dt, T=T, entries=entries, window=T,
                          meta={"dx": dx, "mollifier_width": eps,
                                "mollifier_cells": mollifier_cells,
                                "rounding": max(abs(r) for r in
                                                td_rounding(tree, dx).values())})


def td_rounding(tree: MetricTree, dx: float) -> dict[str, float]:
    return {e.id: round(e.length / dx) * dx - e.length for e in tree.edges}


# --- Fourier bridge -------------------------------------------------------------------


def fourier_of_response(entry: ResponseEntry, k: complex, T: float) -> tuple[complex, float]:
    """int_0^T R(t) e^{ikt} dt plus a truncation-tail bound estimate.

    Atoms transform analytically (delta' at beta -> -ik e^{ik beta}); the
    sampled regular part goes through trapezoid quadrature.
    """
    kappa = float(np.imag(k))
    if kappa <= 0:
        raise NonDecaying(f"need Im k > 0 for truncation decay, got {k}")
    value = entry.train.restricted(T).fourier(k)
    reg = entry.regular
    m = min(reg.n, reg.slot_floor(T) + 1)
    t = reg.dt * np.arange(m)
    value += complex(np.trapezoid(reg.values[:m] * np.exp(1j * k * t), dx=reg.dt))

    # tail estimate from the train's own late-window statistics
    times = [float(a[0]) for a in entry.train]
    late = [(float(tt), abs(c) if o == DPRIME else 0.0, abs(c) if o == DELTA else 0.0)
            for tt, c, o in entry.train if tt >= 0.5 * T]
    gaps = [b - a for a, b in zip(times, times[1:]) if b - a > 1e-9]
    gap = max(min(gaps) if gaps else 0.1, 0.05)
    amp1 = max([a for _, a, _ in late], default=1.0)
    amp0 = max([a for _, _, a in late], default=0.0)
    reg_amp = float(np.max(np.abs(reg.values))) if reg.n else 0.0
    geom = 1.0 / max(1.0 - np.exp(-kappa * gap), 1e-3)
    tail = float(np.exp(-kappa * T) * ((abs(k) * amp1 + amp0) * geom + reg_amp / kappa))
    return value, tail
