"""Uniformly sampled causal functions of time.

Sample k holds f(k*dt), t starts at 0, and every consumer honors the zero
extension to t < 0. At a jump the stored sample is the right-hand limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import GridMismatch

GRID_REL_TOL = 1e-6  # how far off-grid a time may sit, relative to dt


@dataclass
class SampledFunction:
    dt: float
    values: np.ndarray

    def __post_init__(self):
        if self.dt <= 0:
            raise GridMismatch(f"dt must be positive, got {self.dt}")
        self.values = np.asarray(self.values, dtype=float)

    @staticmethod
    def zeros(dt: float, horizon: float) -> "SampledFunction":
        return SampledFunction(dt, np.zeros(n_samples(dt, horizon)))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def horizon(self) -> float:
        return (self.n - 1) * self.dt

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n)

    def copy(self) -> "SampledFunction":
        return SampledFunction(self.dt, self.values.copy())

    def slot(self, t: float) -> int:
        """Grid index of time t; raises GridMismatch if t is off-grid."""
        k = round(t / self.dt)
        if abs(t - k * self.dt) > GRID_REL_TOL * self.dt:
            raise GridMismatch(f"time {t} is not on the dt={self.dt} grid")
        return int(k)

    def shifted(self, t0: float, scale: float = 1.0, n_out: int | None = None) -> "SampledFunction":
        """scale * f(t - t0) on the same grid (zero extension honored)."""
        k = self.slot(t0)
        n_out = self.n if n_out is None else n_out
        out = np.zeros(n_out)
        if k >= 0:
            m = min(n_out - k, self.n)
            if m > 0:
                out[k:k + m] = scale * self.values[:m]
        else:
            m = min(n_out, self.n + k)
            if m > 0:
                out[:m] = scale * self.values[-k:-k + m]
        return SampledFunction(self.dt, out)

    def l2(self, upto: float | None = None) -> float:
        v = self.values if upto is None else self.values[:self.slot_floor(upto) + 1]
        return float(np.sqrt(np.trapezoid(v * v, dx=self.dt)))

    def slot_floor(self, t: float) -> int:
        return min(self.n - 1, max(0, int(np.floor(t / self.dt + GRID_REL_TOL))))


def n_samples(dt: float, horizon: float) -> int:
    n = round(horizon / dt)
    if abs(horizon - n * dt) > GRID_REL_TOL * dt:
        raise GridMismatch(f"horizon {horizon} is not a multiple of dt={dt}")
    return n + 1


def same_grid(*fs: SampledFunction) -> float:
    dts = {f.dt for f in fs}
    if len(dts) != 1:
        raise GridMismatch(f"mixed sample steps: {sorted(dts)}")
    return dts.pop()


def conv_trapz(f: SampledFunction, g: SampledFunction, n_out: int | None = None) -> SampledFunction:
    """Causal trapezoid convolution (f*g)(k dt) of two causal sampled functions."""
    dt = same_grid(f, g)
    n_out = min(f.n, g.n) if n_out is None else n_out
    full = fftconvolve(f.values, g.values)[:n_out]
    if len(full) < n_out:
        full = np.pad(full, (0, n_out - len(full)))
    fv = f.values[:n_out] if f.n >= n_out else np.pad(f.values, (0, n_out - f.n))
    gv = g.values[:n_out] if g.n >= n_out else np.pad(g.values, (0, n_out - g.n))
    out = dt * (full - 0.5 * f.values[0] * gv - 0.5 * g.values[0] * fv)
    return SampledFunction(dt, out)


def cumint_trapz(f: SampledFunction) -> SampledFunction:
    """Trapezoid cumulative integral from 0; continuous output."""
    v = f.values
    out = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * f.dt)])
    return SampledFunction(f.dt, out)


def derivative_samples(f: SampledFunction) -> SampledFunction:
    """Centered second-order derivative (one-sided at the ends)."""
    v, dt = f.values, f.dt
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2 * dt)
    out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * dt) if f.n >= 3 else 0.0
    out[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * dt) if f.n >= 3 else 0.0
    return SampledFunction(dt, out)
