"""Uniform periodic grids on [-L, L) and the spectral calculus built on them.

Points are ``x_j = -L + j*dx`` with ``dx = 2L/n``; the grid is periodic with
period ``2L`` so ``x = -L`` doubles as the right end ``x = +L``.  Wavenumbers
come back in FFT order, which is what ``numpy.fft`` expects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError, ValidationError

__all__ = [
    "Grid1D",
    "Grid2D",
    "make_grid",
    "make_grid_2d",
    "wavenumbers",
    "spectral_derivative",
    "spectral_laplacian",
    "boundary_ratio",
    "seam_taper",
]


@dataclass(frozen=True)
class Grid1D:
    """Origin-symmetric periodic grid.

    Use :func:`make_grid` to build one; the constructor validates too, so a
    ``Grid1D`` that exists is always valid.
    """

    half_width: float
    n: int

    def __post_init__(self):
        L, n = self.half_width, self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise ValidationError(f"point count must be an integer, got {n!r}")
        if n < 8:
            raise ValidationError(f"need n >= 8 grid points, got {n}")
        if n % 2:
            raise ValidationError(f"grid point count must be even, got {n}")
        if not (isinstance(L, (int, float, np.floating, np.integer)) and math.isfinite(L) and L > 0):
            raise ValidationError(f"half_width must be positive and finite, got {L!r}")
        object.__setattr__(self, "half_width", float(L))
        object.__setattr__(self, "n", int(n))

    ndim = 1

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n

    @cached_property
    def points(self) -> np.ndarray:
        # (j - n/2)*dx makes x_{n/2} = 0 and x_{n-j} = -x_j bit-exactly.
        x = (np.arange(self.n) - self.n // 2) * self.dx
        x[0] = -self.half_width
        x.setflags(write=False)
        return x

    @cached_property
    def k(self) -> np.ndarray:
        m = np.fft.fftfreq(self.n) * self.n
        k = m * (math.pi / self.half_width)
        k.setflags(write=False)
        return k

    @property
    def shape(self) -> tuple[int]:
        return (self.n,)

    @property
    def cell_volume(self) -> float:
        return self.dx

    @property
    def center_index(self) -> tuple[int]:
        return (self.n // 2,)

    def mesh(self) -> tuple[np.ndarray]:
        return (self.points,)


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two :class:`Grid1D` axes; arrays are indexed ``[ix, iy]``."""

    x: Grid1D
    y: Grid1D

    def __post_init__(self):
        if not (isinstance(self.x, Grid1D) and isinstance(self.y, Grid1D)):
            raise ValidationError("Grid2D axes must be Grid1D instances")

    ndim = 2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.n, self.y.n)

    @property
    def cell_volume(self) -> float:
        return self.x.dx * self.y.dx

    @property
    def center_index(self) -> tuple[int, int]:
        return (self.x.n // 2, self.y.n // 2)

    @property
    def axes(self) -> tuple[Grid1D, Grid1D]:
        return (self.x, self.y)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.x.points, self.y.points, indexing="ij"))


def make_grid(half_width: float, n: int) -> Grid1D:
    """Grid of ``n`` points on ``[-half_width, half_width)``.

    >>> g = make_grid(2.0, 8)
    >>> g.dx, g.points[4]
    (0.5, 0.0)
    """
    return Grid1D(half_width, n)


def make_grid_2d(half_width: float, n: int, half_width_y: float | None = None,
                 n_y: int | None = None) -> Grid2D:
    gx = make_grid(half_width, n)
    gy = make_grid(half_width if half_width_y is None else half_width_y, n if n_y is None else n_y)
    return Grid2D(gx, gy)


def wavenumbers(g: Grid1D) -> np.ndarray:
    """Angular wavenumbers ``m*pi/L`` in FFT order (0, 1, ..., n/2-1, -n/2, ..., -1)."""
    if not isinstance(g, Grid1D):
        raise ValidationError("wavenumbers expects a Grid1D")
    return g.k


def _axes_of(g):
    if isinstance(g, Grid1D):
        return (g,)
    if isinstance(g, Grid2D):
        return g.axes
    raise ValidationError(f"expected Grid1D or Grid2D, got {type(g).__name__}")


def _check_shape(field: np.ndarray, g) -> np.ndarray:
    field = np.asarray(field)
    if field.shape != g.shape:
        raise DimensionMismatchError(f"field shape {field.shape} does not match grid shape {g.shape}")
    return field


def spectral_derivative(field, g, axis: int = 0, order: int = 1) -> np.ndarray:
    """Periodic spectral derivative of ``field`` along ``axis``.

    The Nyquist coefficient is zeroed for odd orders, so real input gives
    real output and the first derivative stays skew-adjoint.
    """
    field = _check_shape(field, g)
    gx = _axes_of(g)[axis]
    k = gx.k.copy()
    if order % 2:
        k[gx.n // 2] = 0.0
    mult = (1j * k) ** order
    shape = [1] * field.ndim
    shape[axis] = gx.n
    out = np.fft.ifft(np.fft.fft(field, axis=axis) * mult.reshape(shape), axis=axis)
    if np.isrealobj(field):
        out = out.real
    return out


def spectral_laplacian(field, g) -> np.ndarray:
    """Sum of periodic spectral second derivatives over every axis of ``g``."""
    field = _check_shape(field, g)
    axes = _axes_of(g)
    ksq = sum(
        (ax.k ** 2).reshape([-1 if i == j else 1 for j in range(len(axes))])
        for i, ax in enumerate(axes)
    )
    out = np.fft.ifftn(-ksq * np.fft.fftn(field))
    if np.isrealobj(field):
        out = out.real
    return out


def boundary_ratio(field, g) -> float:
    """Largest ``|field|`` on the outermost grid points relative to ``max |field|``.

    Zero for an identically zero field.
    """
    mag = np.abs(_check_shape(field, g))
    peak = mag.max()
    if peak == 0:
        return 0.0
    if mag.ndim == 1:
        edge = max(mag[0], mag[-1])
    else:
        edge = max(mag[0, :].max(), mag[-1, :].max(), mag[:, 0].max(), mag[:, -1].max())
    return float(edge / peak)


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        up = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        down = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return up / (up + down)


def seam_taper(g, inner: float = 0.55, outer: float = 0.95) -> np.ndarray:
    """Smooth window equal to 1 for ``|x| <= inner*L`` and 0 for ``|x| >= outer*L``.

    Multiplying a decayed field by this window removes the tiny jump it has
    across the periodic seam without touching it near the centre, so
    spectral derivatives evaluated in ``|x| < inner*L`` are exact up to
    resolution.
    """
    def axis(ax: Grid1D) -> np.ndarray:
        r = np.abs(ax.points) / ax.half_width
        return 1.0 - _smooth_step((r - inner) / (outer - inner))

    if isinstance(g, Grid1D):
        return axis(g)
    if isinstance(g, Grid2D):
        return axis(g.x)[:, None] * axis(g.y)[None, :]
    raise ValidationError(f"expected Grid1D or Grid2D, got {type(g).__name__}")
