"""Complex PT-symmetric Rosen-Morse wells in one and two dimensions.

The real part ``V`` guides (even in position), the imaginary part ``W`` is
the gain/loss profile (odd in position).  ``W`` tends to ``+-2b`` far from the
well instead of decaying, which is what drives the instabilities studied in
:mod:`ptrosen.linstab` and :mod:`ptrosen.propagate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ValidationError
from .grid import Grid1D, Grid2D

__all__ = [
    "PotentialParams",
    "ComplexPotentialSample",
    "W_SCALES",
    "rosen_morse_1d",
    "rosen_morse_2d",
    "check_pt_symmetry",
    "periodic_samples",
]

#: Admissible 2D gain/loss prefactors: 4 for the ``paper`` variant, 2 for the one whose
#: phase equation closes with theta = b(x + y).
W_SCALES = (2.0, 4.0)


@dataclass(frozen=True)
class PotentialParams:
    """Strengths of the real (``a``) and imaginary (``b``) parts of the well."""

    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            try:
                v = float(v)
            except (TypeError, ValueError):
                raise ValidationError(f"{name} must be a real number, got {v!r}") from None
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)

    @property
    def amplitude_squared(self) -> float:
        """``a^2 + a + 2``, the squared mode amplitude (always >= 7/4)."""
        return self.a * self.a + self.a + 2.0


class ComplexPotentialSample(NamedTuple):
    V: np.ndarray | float
    W: np.ndarray | float


def _sech2(x):
    return 1.0 / np.cosh(x) ** 2


def rosen_morse_1d(p: PotentialParams, x) -> ComplexPotentialSample:
    """``V = -a(a+1) sech^2 x``, ``W = 2b tanh x``.  Accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        V = -p.a * (p.a + 1.0) * _sech2(x)
    W = 2.0 * p.b * np.tanh(x)
    if V.ndim == 0:
        return ComplexPotentialSample(float(V), float(W))
    return ComplexPotentialSample(V, W)


def _check_w_scale(w_scale) -> float:
    try:
        w = float(w_scale)
    except (TypeError, ValueError):
        raise ValidationError(f"w_scale must be 2 or 4, got {w_scale!r}") from None
    if w not in W_SCALES:
        raise ValidationError(f"w_scale must be 2 or 4, got {w_scale!r}")
    return w


def rosen_morse_2d(p: PotentialParams, x, y, w_scale: float = 4.0) -> ComplexPotentialSample:
    """Separable-well 2D potential.

    ``V = 2(sech^2 x + sech^2 y) - (a^2+a+2) sech^2 x sech^2 y`` and
    ``W = w_scale * b * (tanh x + tanh y)``.
    """
    w = _check_w_scale(w_scale)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore"):
        sx, sy = _sech2(x), _sech2(y)
    V = 2.0 * (sx + sy) - p.amplitude_squared * sx * sy
    W = w * p.b * (np.tanh(x) + np.tanh(y))
    if np.ndim(V) == 0:
        return ComplexPotentialSample(float(V), float(W))
    return ComplexPotentialSample(V, W)


def check_pt_symmetry(sampler: Callable[..., ComplexPotentialSample], g: Grid1D | Grid2D) -> float:
    """Max over the grid of ``|V(r) - V(-r)| + |W(r) + W(-r)|``.

    ``sampler`` is called with the coordinate arrays (``sampler(x)`` in 1D,
    ``sampler(x, y)`` in 2D) and evaluated at the literal mirror points, so
    the periodic seam at ``-L`` is compared with ``+L``.
    """
    coords = g.mesh()
    here = sampler(*coords)
    there = sampler(*(-c for c in coords))
    dv = np.abs(np.asarray(here.V) - np.asarray(there.V))
    dw = np.abs(np.asarray(here.W) + np.asarray(there.W))
    return float(np.max(dv + dw))


def periodic_samples(p: PotentialParams, g: Grid1D | Grid2D,
                     w_scale: float | None = None) -> ComplexPotentialSample:
    """``V`` and ``W`` on a periodic grid, as seen by FFT-based operators.

    The grid point ``x = -L`` is also ``x = +L``, where ``tanh`` jumps by
    ``2 tanh L``.  There ``tanh`` is replaced by the mean of its two one-sided
    values, zero, which keeps the sampled ``W`` exactly odd under the periodic
    reflection ``j -> n - j``.  Every other point equals the pointwise value.
    """
    if isinstance(g, Grid1D):
        V, _ = rosen_morse_1d(p, g.points)
        t = np.tanh(g.points)
        t[0] = 0.0
        return ComplexPotentialSample(V, 2.0 * p.b * t)
    if isinstance(g, Grid2D):
        w = _check_w_scale(4.0 if w_scale is None else w_scale)
        X, Y = g.mesh()
        V, _ = rosen_morse_2d(p, X, Y, w)
        tx = np.tanh(g.x.points)
        ty = np.tanh(g.y.points)
        tx[0] = 0.0
        ty[0] = 0.0
        return ComplexPotentialSample(V, w * p.b * (tx[:, None] + ty[None, :]))
    raise ValidationError(f"expected Grid1D or Grid2D, got {type(g).__name__}")
