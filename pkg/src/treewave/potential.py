"""Per-edge potential profiles.

A profile lives on an edge's local coordinate [0, l]. Supported
representations: zero, constant, piecewise-constant, uniformly sampled.
All are integrable, which is the only regularity the solvers need.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PotentialProfile:
    kind: str  # "zero" | "constant" | "piecewise" | "sampled"
    value: float = 0.0
    breakpoints: tuple[float, ...] = ()   # interior breakpoints, increasing
    values: tuple[float, ...] = ()        # piecewise: len(breakpoints)+1 values
    dx: float = 0.0                       # sampled: grid step
    samples: tuple[float, ...] = field(default=(), repr=False)

    # --- constructors ---------------------------------------------------

    @staticmethod
    def zero() -> "PotentialProfile":
        return PotentialProfile(kind="zero")

    @staticmethod
    def constant(c: float) -> "PotentialProfile":
        if c == 0.0:
            return PotentialProfile.zero()
        return PotentialProfile(kind="constant", value=float(c))

    @staticmethod
    def piecewise(breakpoints, values) -> "PotentialProfile":
        bp = tuple(float(b) for b in breakpoints)
        vals = tuple(float(v) for v in values)
        if len(vals) != len(bp) + 1:
            raise ValueError("piecewise profile needs len(values) == len(breakpoints)+1")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        return PotentialProfile(kind="piecewise", breakpoints=bp, values=vals)

    @staticmethod
    def sampled(dx: float, samples) -> "PotentialProfile":
        if dx <= 0:
            raise ValueError("sampled profile needs dx > 0")
        return PotentialProfile(kind="sampled", dx=float(dx),
                                samples=tuple(float(v) for v in samples))

    # --- evaluation -------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.value)
        if self.kind == "piecewise":
            idx = np.searchsorted(np.asarray(self.breakpoints), x, side="right")
            return np.asarray(self.values, dtype=float)[idx]
        # sampled: linear interpolation, clamped ends
        grid = self.dx * np.arange(len(self.samples))
        return np.interp(x, grid, np.asarray(self.samples))

    def pieces(self, length: float):
        """Constant pieces [(x0, x1, q)] covering [0, length], or None if sampled."""
        if self.kind == "zero":
            return [(0.0, length, 0.0)]
        if self.kind == "constant":
            return [(0.0, length, self.value)]
        if self.kind == "piecewise":
            xs = [0.0, *[b for b in self.breakpoints if b < length], length]
            return [(x0, x1, float(self((x0 + x1) / 2)))
                    for x0, x1 in zip(xs, xs[1:]) if x1 > x0]
        return None

    def integral(self, a: float, b: float) -> float:
        """Exact integral over [a, b] for piecewise kinds, trapezoid for sampled."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "constant":
            return self.value * (b - a)
        if self.kind == "piecewise":
            total = 0.0
            for x0, x1, q in self.pieces(max(b, a)):
                lo, hi = max(a, x0), min(b, x1)
                if hi > lo:
                    total += q * (hi - lo)
            return total
        grid = self.dx * np.arange(len(self.samples))
        fine = np.linspace(a, b, max(8, int(np.ceil((b - a) / self.dx)) * 4 + 1))
        return float(np.trapezoid(np.interp(fine, grid, np.asarray(self.samples)), fine))

    def reversed(self, length: float) -> "PotentialProfile":
        """The same profile seen from the other end of the edge."""
        if self.kind in ("zero", "constant"):
            return self
        if self.kind == "piecewise":
            bp = tuple(length - b for b in reversed(self.breakpoints))
            return PotentialProfile.piecewise(bp, tuple(reversed(self.values)))
        return PotentialProfile.sampled(self.dx, tuple(reversed(self.samples)))

    def is_zero(self) -> bool:
        if self.kind == "zero":
            return True
        if self.kind == "constant":
            return self.value == 0.0
        if self.kind == "piecewise":
            return all(v == 0.0 for v in self.values)
        return all(v == 0.0 for v in self.samples)
