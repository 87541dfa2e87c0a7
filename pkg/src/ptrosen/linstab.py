"""Linear stability of stationary modes.

Perturbations ``f, g`` of a mode ``phi`` with growth rate ``eta`` satisfy the
block eigenproblem::

    [[0, L1], [L2, 0]] (f, g) = -i eta (f, g)
    L1 = d_xx + (V + iW) +   sigma |phi|^2 - lam
    L2 = d_xx + (V + iW) + 3 sigma |phi|^2 - lam

and the mode is linearly unstable when some ``eta`` has a positive real part.
``d_xx`` is discretized either by Fourier collocation on the periodic grid
(``disc="fourier"``) or by second-order central differences on the interior
nodes with Dirichlet ends at ``x = -L`` and ``x = +L`` (``disc="fd"``).  The
spectrum is computed in full with a dense LAPACK eigensolver.

Structural facts used by the diagnostics below: ``M(f, -g) = -mu (f, -g)``,
so eigenvalues come in ``+-`` pairs; when ``|phi|^2`` and ``V`` are even and
``W`` odd on the nodes, the operators commute with the antilinear reflection
``x -> -x, i -> -i`` and the spectrum is closed under conjugation.  ``eta = 0``
is always an eigenvalue (``L1 phi = 0`` for an exact mode) and is usually
defective, so round-off scatters it into a small ring; pairing checks skip a
disc of radius ``zero_radius`` around the origin for that reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.linalg import toeplitz

from .errors import ConvergenceError, DimensionMismatchError, SizeBudgetError, ValidationError
from .grid import Grid1D
from .modes import LocalizedMode, evaluate_mode
from .potential import PotentialParams, periodic_samples, rosen_morse_1d

__all__ = [
    "DISCRETIZATIONS",
    "MAX_OPERATOR_SIZE",
    "MAX_EIG_SIZE",
    "LinearizationOperators",
    "StabilitySpectrum",
    "fourier_d2_matrix",
    "fd_d2_matrix",
    "build_operators",
    "eig_dense",
    "backward_error",
    "stability_spectrum",
    "max_growth_rate",
    "default_tolerance",
    "pairing_defect",
    "analyze_mode",
]

DISCRETIZATIONS = ("fourier", "fd")
MAX_OPERATOR_SIZE = 2048
MAX_EIG_SIZE = 4096
ZERO_RADIUS = 1e-4


def fourier_d2_matrix(g: Grid1D) -> np.ndarray:
    """Dense periodic second-derivative matrix of the trigonometric interpolant.

    Symmetric Toeplitz; for even ``n`` on a period ``2L``::

        D[j, j]     = -(pi/L)^2 (n^2/12 + 1/6)
        D[j, j + m] = -(pi/L)^2 (-1)^m / (2 sin^2(m pi / n))
    """
    n = g.n
    m = np.arange(1, n)
    col = np.empty(n)
    col[0] = -(n * n / 12.0 + 1.0 / 6.0)
    col[1:] = -0.5 * (-1.0) ** m / np.sin(m * np.pi / n) ** 2
    return toeplitz(col * (np.pi / g.half_width) ** 2)


def fd_d2_matrix(n_nodes: int, dx: float) -> np.ndarray:
    """Tridiagonal ``[1, -2, 1]/dx^2`` (homogeneous Dirichlet just outside both ends)."""
    main = np.full(n_nodes, -2.0)
    off = np.ones(n_nodes - 1)
    return (np.diag(main) + np.diag(off, 1) + np.diag(off, -1)) / dx**2


@dataclass(frozen=True)
class LinearizationOperators:
    """``L1``, ``L2`` on the discretization nodes, plus what built them."""

    L1: np.ndarray
    L2: np.ndarray
    disc: str
    grid: Grid1D
    nodes: np.ndarray
    params: PotentialParams
    sigma: int
    lam: float

    @property
    def size(self) -> int:
        return self.L1.shape[0]

    def block_matrix(self) -> np.ndarray:
        n = self.size
        M = np.zeros((2 * n, 2 * n), dtype=complex)
        M[:n, n:] = self.L1
        M[n:, :n] = self.L2
        return M


@dataclass
class StabilitySpectrum:
    """Growth rates ``eta`` sorted by descending real part, then ascending imaginary part."""

    etas: np.ndarray
    max_growth: float
    classification: str
    tol: float
    meta: dict = field(default_factory=dict)

    @property
    def unstable(self) -> bool:
        return self.classification == "unstable"

    def negation_defect(self, zero_radius: float = ZERO_RADIUS) -> float:
        return pairing_defect(self.etas, "negation", zero_radius)

    def conjugation_defect(self, zero_radius: float = ZERO_RADIUS) -> float:
        return pairing_defect(self.etas, "conjugation", zero_radius)

    def to_metadata(self) -> dict:
        return {**self.meta, "max_growth": self.max_growth,
                "classification": self.classification, "tol": self.tol}


def default_tolerance(lam: float) -> float:
    """Threshold on ``Re eta`` for calling a spectrum unstable: ``1e-6 (1 + |lam|)``."""
    return 1e-6 * (1.0 + abs(lam))


def build_operators(field, p: PotentialParams, sigma: int, lam: float, g: Grid1D,
                    disc: str = "fourier") -> LinearizationOperators:
    """Assemble ``L1`` and ``L2`` around the sampled mode ``field``.

    Fourier: ``n x n`` on all grid points; ``W`` at the seam point ``x = -L``
    is the periodic mean, 0 (see :func:`ptrosen.potential.periodic_samples`).
    FD: ``(n-1) x (n-1)`` on ``x_1 .. x_{n-1}``, a node set symmetric about 0,
    with the Dirichlet ends at ``x = -L`` and ``x = +L``.
    """
    if not isinstance(g, Grid1D):
        raise DimensionMismatchError("linear stability is one-dimensional; need a Grid1D")
    if disc not in DISCRETIZATIONS:
        raise ValidationError(f"disc must be one of {DISCRETIZATIONS}, got {disc!r}")
    if sigma not in (1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma}")
    if g.n > MAX_OPERATOR_SIZE:
        raise SizeBudgetError(f"n = {g.n} exceeds the dense budget of {MAX_OPERATOR_SIZE}")
    field = np.asarray(field, dtype=complex)
    if field.shape != g.shape:
        raise DimensionMismatchError(f"field shape {field.shape} does not match grid shape {g.shape}")

    if disc == "fourier":
        nodes = g.points
        V, W = periodic_samples(p, g)
        D = fourier_d2_matrix(g)
        u = field
    else:
        nodes = g.points[1:]
        V, W = rosen_morse_1d(p, nodes)
        D = fd_d2_matrix(nodes.size, g.dx)
        u = field[1:]

    base = V + 1j * W - lam
    dens = sigma * np.abs(u) ** 2
    L1 = D + np.diag(base + dens)
    L2 = D + np.diag(base + 3.0 * dens)
    return LinearizationOperators(L1, L2, disc, g, np.array(nodes), p, sigma, float(lam))


def eig_dense(M) -> np.ndarray:
    """All eigenvalues of a dense complex matrix (LAPACK ``geev``, balanced QR)."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"need a square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_EIG_SIZE:
        raise SizeBudgetError(f"matrix size {M.shape[0]} exceeds {MAX_EIG_SIZE}")
    if not np.all(np.isfinite(M)):
        raise ValidationError("matrix has non-finite entries")
    try:
        return scipy.linalg.eigvals(M, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc


def backward_error(M, mu: complex) -> float:
    """``sigma_min(M - mu I) / ||M||_2``: the relative perturbation making ``mu`` exact."""
    M = np.asarray(M, dtype=complex)
    s = scipy.linalg.svdvals(M - mu * np.eye(M.shape[0]))
    norm = scipy.linalg.norm(M, 2)
    return float(s[-1] / norm) if norm else float(s[-1])


def _sort_etas(etas: np.ndarray) -> np.ndarray:
    return etas[np.lexsort((etas.imag, -etas.real))]


def max_growth_rate(s: StabilitySpectrum | np.ndarray, tol: float) -> tuple[float, str]:
    """``(max Re eta, "unstable" if it exceeds tol else "stable")``."""
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    etas = s.etas if isinstance(s, StabilitySpectrum) else np.asarray(s)
    g = float(np.max(etas.real))
    return g, "unstable" if g > tol else "stable"


def stability_spectrum(ops: LinearizationOperators, tol: float | None = None) -> StabilitySpectrum:
    """Solve the block problem and classify.  ``tol`` defaults to :func:`default_tolerance`."""
    tol = default_tolerance(ops.lam) if tol is None else float(tol)
    mu = eig_dense(ops.block_matrix())
    etas = _sort_etas(1j * mu)
    growth, cls = max_growth_rate(etas, tol)
    meta = {
        "a": ops.params.a,
        "b": ops.params.b,
        "sigma": ops.sigma,
        "lambda": ops.lam,
        "disc": ops.disc,
        "n": ops.grid.n,
        "L": ops.grid.half_width,
    }
    return StabilitySpectrum(etas, growth, cls, tol, meta)


def pairing_defect(etas, kind: str = "negation", zero_radius: float = ZERO_RADIUS) -> float:
    """Worst distance from ``T(eta)`` to the spectrum, ``T`` negation or conjugation.

    Eigenvalues with ``|eta| < zero_radius`` (the scattered zero mode) are
    skipped.  Returns 0.0 when nothing is left to check.
    """
    etas = np.asarray(etas, dtype=complex)
    if kind == "negation":
        image = -etas
    elif kind == "conjugation":
        image = np.conj(etas)
    else:
        raise ValidationError(f"kind must be 'negation' or 'conjugation', got {kind!r}")
    keep = np.abs(etas) >= zero_radius
    if not keep.any():
        return 0.0
    d = np.abs(image[keep][:, None] - etas[None, :]).min(axis=1)
    return float(d.max())


def analyze_mode(m: LocalizedMode, g: Grid1D, disc: str = "fourier",
                 tol: float | None = None) -> StabilitySpectrum:
    """Sample ``m`` on ``g``, build the operators and return its spectrum."""
    if m.dimension != 1:
        raise DimensionMismatchError("linear stability is computed for 1D modes only")
    ops = build_operators(evaluate_mode(m, g), m.params, m.sigma, m.lam, g, disc)
    return stability_spectrum(ops, tol)
