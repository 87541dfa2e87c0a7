"""Closed-form localized modes, the linear bound-state levels, and a residual check.

Stationary solutions have the form ``Psi = phi * exp(i*lam*z)`` with::

    laplacian(phi) + (V + iW) phi + sigma |phi|^2 phi - lam phi = 0

:func:`residual_norm` evaluates the left-hand side spectrally, so any mode
constructed here can be checked against the equation it is claimed to solve.
Two constructions are known not to pass that check (the literal defocusing
mode and the ``variant="paper"`` 2D triple); they are kept verbatim and flagged.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DecayError, DimensionMismatchError, PoleError, ValidationError
from .grid import Grid1D, Grid2D, boundary_ratio, seam_taper, spectral_laplacian
from .potential import PotentialParams, periodic_samples

__all__ = [
    "LocalizedMode",
    "LinearSpectrum",
    "focusing_mode_1d",
    "defocusing_mode_1d",
    "mode_2d",
    "linear_spectrum",
    "evaluate_mode",
    "residual_norm",
    "mode_residual",
    "require_decay",
    "stationary_operator",
    "DECAY_THRESHOLD",
]

#: Boundary-to-peak ratio below which periodic spectral derivatives are trusted.
DECAY_THRESHOLD = 1e-6

POLE_GUARD = 1e-12


@dataclass(frozen=True)
class LocalizedMode:
    """A sech-shaped stationary mode ``A sech(x) [sech(y)] exp(i s (x [+ y]))``.

    ``lam`` is the propagation constant (``lambda`` in the JSON record).
    ``w_scale`` is the 2D gain/loss prefactor the mode was built for and is
    ``None`` in 1D.  ``literal`` marks constructions kept verbatim
    even though they fail the residual check.
    """

    dimension: int
    params: PotentialParams
    sigma: int
    amplitude: complex
    phase_slope: float
    lam: float
    w_scale: float | None = None
    literal: bool = False

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValidationError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.sigma not in (1, -1):
            raise ValidationError(f"sigma must be +1 or -1, got {self.sigma}")
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def b(self) -> float:
        return self.params.b

    def evaluate(self, g: Grid1D | Grid2D) -> np.ndarray:
        return evaluate_mode(self, g)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "a": self.a,
            "b": self.b,
            "sigma": self.sigma,
            "amplitude_re": self.amplitude.real,
            "amplitude_im": self.amplitude.imag,
            "phase_slope": self.phase_slope,
            "lambda": self.lam,
            "w_scale": self.w_scale,
            "literal": self.literal,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LocalizedMode":
        return cls(
            dimension=int(d["dimension"]),
            params=PotentialParams(d["a"], d["b"]),
            sigma=int(d["sigma"]),
            amplitude=complex(d["amplitude_re"], d["amplitude_im"]),
            phase_slope=float(d["phase_slope"]),
            lam=float(d["lambda"]),
            w_scale=None if d.get("w_scale") is None else float(d["w_scale"]),
            literal=bool(d.get("literal", False)),
        )


@dataclass(frozen=True)
class LinearSpectrum:
    params: PotentialParams
    levels: tuple[float, ...] = field(default_factory=tuple)

    @property
    def n_max(self) -> int | None:
        return len(self.levels) - 1 if self.levels else None

    def all_positive(self) -> bool:
        return bool(self.levels) and all(v > 0 for v in self.levels)

    def to_rows(self) -> list[tuple[int, float]]:
        return list(enumerate(self.levels))


def focusing_mode_1d(p: PotentialParams) -> LocalizedMode:
    """``sqrt(a^2+a+2) sech(x) exp(ibx)`` with ``lam = 1 - b^2`` (``sigma = +1``)."""
    return LocalizedMode(
        dimension=1,
        params=p,
        sigma=1,
        amplitude=math.sqrt(p.amplitude_squared),
        phase_slope=p.b,
        lam=1.0 - p.b * p.b,
    )


def defocusing_mode_1d(p: PotentialParams) -> LocalizedMode:
    """The literal self-defocusing mode, ``sqrt(-(a^2+a+2)) sech(x) exp(ibx)``.

    The square root of the negative number is taken as ``i*sqrt(a^2+a+2)``.
    This profile has ``|A|^2 = a^2+a+2`` but the cubic term of the
    ``sigma = -1`` equation needs ``-|A|^2 = a^2+a+2``, so its residual is
    ``2|A|(a^2+a+2) sech^3 x`` rather than zero.  Flagged ``literal``.
    """
    return LocalizedMode(
        dimension=1,
        params=p,
        sigma=-1,
        amplitude=cmath.sqrt(-p.amplitude_squared),
        phase_slope=p.b,
        lam=1.0 - p.b * p.b,
        literal=True,
    )


def mode_2d(p: PotentialParams, variant: str = "paper") -> LocalizedMode:
    """2D mode ``sqrt(a^2+a+2) sech x sech y exp(ib(x+y))``.

    ``variant="paper"`` pairs it with ``W = 4b(tanh x + tanh y)`` and
    ``lam = 2 - 4b^2``; that triple leaves a residual.
    ``variant="derived"`` uses ``W = 2b(tanh x + tanh y)`` and
    ``lam = 2 - 2b^2``, which solves the equation exactly.
    """
    if variant == "paper":
        lam, w_scale, literal = 2.0 - 4.0 * p.b * p.b, 4.0, True
    elif variant == "derived":
        lam, w_scale, literal = 2.0 - 2.0 * p.b * p.b, 2.0, False
    else:
        raise ValidationError(f"variant must be 'paper' or 'derived', got {variant!r}")
    return LocalizedMode(
        dimension=2,
        params=p,
        sigma=1,
        amplitude=math.sqrt(p.amplitude_squared),
        phase_slope=p.b,
        lam=lam,
        w_scale=w_scale,
        literal=literal,
    )


def linear_spectrum(p: PotentialParams) -> LinearSpectrum:
    """Bound-state levels ``-(a-n)^2 + b^2/(a-n)^2`` for integers ``0 <= n < a``."""
    levels = []
    n = 0
    while n < p.a:
        d = p.a - n
        if abs(d) < POLE_GUARD:
            raise PoleError(f"a - n = {d:.3g} for n = {n}: level is singular")
        levels.append(-d * d + p.b * p.b / (d * d))
        n += 1
    return LinearSpectrum(p, tuple(levels))


def evaluate_mode(m: LocalizedMode, g: Grid1D | Grid2D) -> np.ndarray:
    """Sample the closed-form profile on ``g`` (complex array of ``g.shape``)."""
    if m.dimension == 1:
        if not isinstance(g, Grid1D):
            raise DimensionMismatchError("1D mode needs a Grid1D")
        x = g.points
        return m.amplitude / np.cosh(x) * np.exp(1j * m.phase_slope * x)
    if not isinstance(g, Grid2D):
        raise DimensionMismatchError("2D mode needs a Grid2D")
    x, y = g.x.points, g.y.points
    fx = 1.0 / np.cosh(x) * np.exp(1j * m.phase_slope * x)
    fy = 1.0 / np.cosh(y) * np.exp(1j * m.phase_slope * y)
    return m.amplitude * fx[:, None] * fy[None, :]


def _interior_mask(g) -> np.ndarray:
    if isinstance(g, Grid1D):
        return np.abs(g.points) <= 0.5 * g.half_width
    mx = np.abs(g.x.points) <= 0.5 * g.x.half_width
    my = np.abs(g.y.points) <= 0.5 * g.y.half_width
    return mx[:, None] & my[None, :]


def require_decay(field, g, what: str = "field") -> None:
    ratio = boundary_ratio(field, g)
    if ratio >= DECAY_THRESHOLD:
        raise DecayError(
            f"{what} is not decayed at the grid boundary "
            f"(|edge|/max = {ratio:.3g} >= {DECAY_THRESHOLD:g}); enlarge the domain"
        )


def stationary_operator(field, p: PotentialParams, sigma: int, lam: float, g,
                        w_scale: float | None = None, taper: bool = True) -> np.ndarray:
    """``laplacian(u) + (V + iW) u + sigma |u|^2 u - lam u`` on the whole grid.

    With ``taper`` the Laplacian acts on ``u * seam_taper(g)``; the result is
    then only meaningful where the taper is 1 (``|x| <= 0.55 L``).
    """
    field = np.asarray(field, dtype=complex)
    V, W = periodic_samples(p, g, w_scale)
    lap = spectral_laplacian(field * seam_taper(g) if taper else field, g)
    return lap + (V + 1j * W) * field + sigma * np.abs(field) ** 2 * field - lam * field


def residual_norm(field, p: PotentialParams, sigma: int, lam: float, g: Grid1D | Grid2D,
                  w_scale: float | None = None) -> float:
    """Sup-norm of the stationary-equation residual over ``|x|, |y| <= L/2``.

    The outer half of the domain is excluded, and the Laplacian is taken of
    the field times a smooth window that is 1 there, so the wrap-around of the
    periodic Laplacian cannot contaminate the verdict.  A field that has not
    decayed at the boundary raises :class:`DecayError` instead of returning a
    meaningless number.
    """
    if sigma not in (1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma}")
    if isinstance(g, Grid2D) and w_scale is None:
        raise ValidationError("2D residual needs w_scale (2 or 4)")
    require_decay(field, g)
    r = stationary_operator(field, p, sigma, lam, g, w_scale)
    return float(np.abs(r[_interior_mask(g)]).max())


def mode_residual(m: LocalizedMode, g: Grid1D | Grid2D) -> float:
    """:func:`residual_norm` of ``m`` evaluated on ``g`` with its own parameters."""
    return residual_norm(evaluate_mode(m, g), m.params, m.sigma, m.lam, g, m.w_scale)
