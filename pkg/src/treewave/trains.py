"""Singular trains (finite sums of Dirac atoms), jump trains, and the
distribution-valued time kernels built from them.

An atom is (time, coefficient, order) with order 0 = delta, 1 = delta'.
Times are kept as plain Python numbers so exact types (Fraction) work in
oracle code; numeric paths convert to numpy on demand.

A Waveform is train + sampled regular part (+ optionally the regular part's
exact jump train, when the producer knows it) + a validity window. Its
convolution implements the two-order algebra:

    (c δ'(.-t)) * g = c g'(.-t)      (classical part + jump atoms of g)
    (c δ (.-t)) * g = c g(.-t)
    train * train: orders add (order 2 is rejected; never needed here)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, InconsistentTrains
from .sampling import SampledFunction, conv_trapz, derivative_samples

DELTA = 0
DPRIME = 1


def merge_atoms(atoms, eps_t=0.0, eps_c=0.0):
    """Sort by (time, order), merge coincident same-order atoms, prune tiny ones."""
    atoms = sorted(atoms, key=lambda a: (a[0], a[2]))
    out = []
    for t, c, order in atoms:
        if out and out[-1][2] == order and abs(t - out[-1][0]) <= eps_t:
            out[-1][1] = out[-1][1] + c
        else:
            out.append([t, c, order])
    return [(t, c, o) for t, c, o in out if abs(c) > eps_c]


@dataclass(frozen=True)
class SingularTrain:
    atoms: tuple = ()

    @staticmethod
    def of(atoms, eps_t=0.0, eps_c=0.0) -> "SingularTrain":
        return SingularTrain(tuple(merge_atoms(atoms, eps_t, eps_c)))

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def is_empty(self) -> bool:
        return not self.atoms

    def order(self, order: int) -> list:
        """(time, coeff) pairs of the given order, in time order."""
        return [(t, c) for t, c, o in self.atoms if o == order]

    def first_time(self, order: int | None = None):
        for t, c, o in self.atoms:
            if order is None or o == order:
                return t
        return None

    def scaled(self, s) -> "SingularTrain":
        return SingularTrain(tuple((t, s * c, o) for t, c, o in self.atoms))

    def shifted(self, t0) -> "SingularTrain":
        return SingularTrain(tuple((t + t0, c, o) for t, c, o in self.atoms))

    def restricted(self, horizon) -> "SingularTrain":
        return SingularTrain(tuple(a for a in self.atoms if a[0] <= horizon))

    def plus(self, other, eps_t=0.0, eps_c=0.0) -> "SingularTrain":
        return SingularTrain.of(list(self.atoms) + list(other.atoms), eps_t, eps_c)

    def convolve(self, other, eps_t=0.0, eps_c=0.0) -> "SingularTrain":
        out = []
        for t1, c1, o1 in self.atoms:
            for t2, c2, o2 in other.atoms:
                if o1 + o2 > DPRIME:
                    raise InconsistentTrains("convolution would produce a delta'' atom")
                out.append((t1 + t2, c1 * c2, o1 + o2))
        return SingularTrain.of(out, eps_t, eps_c)

    def derivative(self) -> "SingularTrain":
        if any(o == DPRIME for _, _, o in self.atoms):
            raise InconsistentTrains("derivative would produce a delta'' atom")
        return SingularTrain(tuple((t, c, DPRIME) for t, c, _ in self.atoms))

    def integral(self):
        """Antiderivative: delta' atoms become delta atoms, delta atoms become
        Heaviside jumps. Returns (train, JumpTrain)."""
        atoms = tuple((t, c, DELTA) for t, c, o in self.atoms if o == DPRIME)
        jumps = tuple((t, c) for t, c, o in self.atoms if o == DELTA)
        return SingularTrain(atoms), JumpTrain(jumps)

    def fourier(self, k) -> complex:
        """Sum of atom transforms under f -> int f(t) e^{ikt} dt."""
        total = 0j
        for t, c, o in self.atoms:
            phase = np.exp(1j * k * float(t))
            total += complex(c) * ((-1j * k) * phase if o == DPRIME else phase)
        return total

    def max_abs(self) -> float:
        return max((abs(c) for _, c, _ in self.atoms), default=0.0)


@dataclass(frozen=True)
class JumpTrain:
    """Sum of Heaviside steps Sum J_m H(t - t_m)."""

    jumps: tuple = ()

    @staticmethod
    def of(jumps, eps_t=0.0, eps_c=0.0) -> "JumpTrain":
        merged = merge_atoms([(t, j, DELTA) for t, j in jumps], eps_t, eps_c)
        return JumpTrain(tuple((t, j) for t, j, _ in merged))

    def __iter__(self):
        return iter(self.jumps)

    def __len__(self):
        return len(self.jumps)

    def scaled(self, s) -> "JumpTrain":
        return JumpTrain(tuple((t, s * j) for t, j in self.jumps))

    def shifted(self, t0) -> "JumpTrain":
        return JumpTrain(tuple((t + t0, j) for t, j in self.jumps))

    def plus(self, other, eps_t=0.0, eps_c=0.0) -> "JumpTrain":
        return JumpTrain.of(list(self.jumps) + list(other.jumps), eps_t, eps_c)

    def to_samples(self, dt: float, n: int) -> SampledFunction:
        out = np.zeros(n)
        for t, j in self.jumps:
            k = round(float(t) / dt)
            if abs(float(t) - k * dt) > 1e-6 * dt:
                raise GridMismatch(f"jump time {t} off the dt={dt} grid")
            if k < 0:
                out += j
            elif k < n:
                out[k:] += j
        return SampledFunction(dt, out)

    def derivative(self) -> SingularTrain:
        return SingularTrain(tuple((t, j, DELTA) for t, j in self.jumps))


@dataclass
class Waveform:
    """Causal kernel: singular train + sampled regular part on [0, window]."""

    train: SingularTrain = field(default_factory=SingularTrain)
    reg: SampledFunction | None = None
    jumps: JumpTrain | None = None   # exact jumps of reg, when the producer knows them
    window: float = float("inf")

    @property
    def dt(self):
        return None if self.reg is None else self.reg.dt

    def reg_or_zeros(self, dt: float, n: int) -> SampledFunction:
        if self.reg is None:
            return SampledFunction(dt, np.zeros(n))
        return self.reg

    def continuous_part(self) -> SampledFunction:
        """reg with its known jump steps removed (continuous, kinks allowed)."""
        if self.reg is None:
            raise GridMismatch("waveform has no sampled part")
        if not self.jumps or len(self.jumps) == 0:
            return self.reg
        steps = self.jumps.to_samples(self.reg.dt, self.reg.n)
        return SampledFunction(self.reg.dt, self.reg.values - steps.values)

    def reg_classical_derivative(self) -> SampledFunction:
        """A.e. derivative of reg: differentiate the continuous part only."""
        return derivative_samples(self.continuous_part())

    def support_start(self) -> float:
        t0 = self.train.first_time()
        candidates = [] if t0 is None else [float(t0)]
        if self.jumps:
            candidates += [float(t) for t, _ in self.jumps]
        if self.reg is not None:
            nz = np.nonzero(np.abs(self.reg.values) > 0)[0]
            if nz.size:
                candidates.append(nz[0] * self.reg.dt)
        return min(candidates, default=float("inf"))

    def scaled(self, s) -> "Waveform":
        reg = None if self.reg is None else SampledFunction(self.reg.dt, s * self.reg.values)
        jumps = None if self.jumps is None else self.jumps.scaled(s)
        return Waveform(self.train.scaled(s), reg, jumps, self.window)

    def plus(self, other: "Waveform", eps_t=0.0, eps_c=0.0) -> "Waveform":
        train = self.train.plus(other.train, eps_t, eps_c)
        regs = [w.reg for w in (self, other) if w.reg is not None]
        reg = None
        if regs:
            dt = regs[0].dt
            n = min(r.n for r in regs) if len(regs) == 2 else regs[0].n
            acc = np.zeros(n)
            for r in regs:
                if r.dt != dt:
                    raise GridMismatch("mixed sample steps in waveform sum")
                acc += r.values[:n]
            reg = SampledFunction(dt, acc)
        jumps = None
        if self.jumps is not None and other.jumps is not None:
            jumps = self.jumps.plus(other.jumps, eps_t, eps_c)
        return Waveform(train, reg, jumps, min(self.window, other.window))

    def convolve(self, other: "Waveform", eps_t=0.0, eps_c=0.0) -> "Waveform":
        """Full two-order convolution; the result's jump train is not tracked."""
        train = self.train.convolve(other.train, eps_t, eps_c)
        extra = []
        reg_parts = []
        dt = self.dt or other.dt
        n = min(w.reg.n for w in (self, other) if w.reg is not None) \
            if (self.reg is not None or other.reg is not None) else 0
        for left, right in ((self, other), (other, self)):
            if right.reg is None or len(left.train) == 0:
                continue
            cl_der = None
            for t, c, order in left.train:
                if order == DELTA:
                    reg_parts.append(right.reg.shifted(float(t), float(c), n).values)
                else:
                    if cl_der is None:
                        cl_der = right.reg_classical_derivative()
                    reg_parts.append(cl_der.shifted(float(t), float(c), n).values)
                    for sigma, J in (right.jumps or ()):
                        extra.append((t + sigma, c * J, DELTA))
        if self.reg is not None and other.reg is not None:
            reg_parts.append(conv_trapz(self.reg, other.reg, n).values)
        reg = SampledFunction(dt, sum(reg_parts)) if reg_parts else None
        window = min(self.window + other.support_start(),
                     other.window + self.support_start())
        return Waveform(train.plus(SingularTrain.of(extra, eps_t, eps_c), eps_t, eps_c),
                        reg, None, window)

    def restricted(self, horizon: float) -> "Waveform":
        reg = self.reg
        if reg is not None:
            n = min(reg.n, reg.slot_floor(horizon) + 1)
            reg = SampledFunction(reg.dt, reg.values[:n].copy())
        jumps = None if self.jumps is None else JumpTrain(
            tuple((t, j) for t, j in self.jumps if t <= horizon))
        return Waveform(self.train.restricted(horizon), reg, jumps,
                        min(self.window, horizon))
