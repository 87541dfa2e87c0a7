"""Split-step (Strang) integration of the NLS equation with a complex potential.

Solves ``i Psi_z + laplacian(Psi) + (V + iW) Psi + sigma |Psi|^2 Psi = 0`` in
1D or 2D.  Each step is a half step of the local part
``exp(i dz/2 [(V + iW) + sigma |Psi|^2])``, a full spectral step of the
Laplacian and another local half step, followed by the absorbing mask.

Because ``W`` tends to ``-2b`` on one side (gain) the domain edges would
amplify outgoing radiation forever; a raised-cosine absorber occupying the
outer ``absorber_width`` fraction of each half axis removes it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import GrowthWindowError, InsufficientDataError, ValidationError
from .grid import Grid1D, Grid2D
from .modes import require_decay
from .potential import PotentialParams, periodic_samples

__all__ = [
    "PropagationConfig",
    "Trajectory",
    "BLOWUP_FACTOR",
    "absorber_profile",
    "seed_noise",
    "split_step",
    "aligned_deviation",
    "phase_rotation_check",
    "growth_rate_fit",
    "shape_loss_classification",
]

BLOWUP_FACTOR = 1e6


@dataclass(frozen=True)
class PropagationConfig:
    """Integration and boundary settings.

    ``absorber_strength`` is the damping rate at the very edge, so the mask
    attenuates by ``exp(absorber_strength)`` per unit ``z`` there; the
    default of 10 gives more than the 1e3 needed to beat ``2|b| <= 6``.
    ``noise_amplitude`` is relative to ``max |initial|``.
    """

    dz: float = 1e-3
    z_end: float = 1.0
    record_stride: int = 10
    absorber_width: float = 0.1
    absorber_strength: float = 10.0
    noise_amplitude: float = 0.0
    seed: int = 0
    keep_snapshots: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.dz) and self.dz > 0):
            raise ValidationError(f"dz must be positive, got {self.dz}")
        if not (math.isfinite(self.z_end) and self.z_end >= self.dz):
            raise ValidationError(f"z_end must be >= dz, got {self.z_end}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValidationError(f"record_stride must be a positive integer, got {self.record_stride}")
        if not 0 <= self.absorber_width < 0.5:
            raise ValidationError(f"absorber_width must lie in [0, 0.5), got {self.absorber_width}")
        if not (math.isfinite(self.absorber_strength) and self.absorber_strength >= 0):
            raise ValidationError(f"absorber_strength must be >= 0, got {self.absorber_strength}")
        if not (math.isfinite(self.noise_amplitude) and self.noise_amplitude >= 0):
            raise ValidationError(f"noise_amplitude must be >= 0, got {self.noise_amplitude}")

    @property
    def n_steps(self) -> int:
        return int(round(self.z_end / self.dz))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Trajectory:
    """Diagnostics recorded every ``record_stride`` steps (``z = 0`` included).

    ``blew_up`` is set when the field went non-finite or its peak intensity
    passed ``BLOWUP_FACTOR`` times the initial peak; ``blowup_z`` is the step
    at which that was detected and the series stop at the last sound record.
    """

    z: np.ndarray
    power: np.ndarray
    peak_intensity: np.ndarray
    boundary_mass: np.ndarray
    snapshots: np.ndarray | None
    grid: Grid1D | Grid2D
    config: PropagationConfig
    blew_up: bool = False
    blowup_z: float | None = None

    def __len__(self) -> int:
        return len(self.z)

    def metadata(self) -> dict:
        return {**self.config.to_dict(), "blew_up": self.blew_up, "blowup_z": self.blowup_z,
                "n_records": len(self)}


def absorber_profile(g: Grid1D | Grid2D, width: float) -> np.ndarray:
    """Raised-cosine ramp: 0 inside ``|x| <= (1 - width) L``, rising to 1 at the edge."""
    def axis(ax: Grid1D) -> np.ndarray:
        if width <= 0:
            return np.zeros(ax.n)
        w = width * ax.half_width
        d = ax.half_width - np.abs(ax.points)
        return np.where(d < w, 0.5 * (1.0 + np.cos(np.pi * d / w)), 0.0)

    if isinstance(g, Grid1D):
        return axis(g)
    return np.maximum(axis(g.x)[:, None], axis(g.y)[None, :])


def seed_noise(shape, amplitude: float, seed: int) -> np.ndarray:
    """Complex Gaussian noise with RMS modulus ``amplitude``; reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    return amplitude * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def split_step(initial, p: PotentialParams, sigma: int, g: Grid1D | Grid2D,
               cfg: PropagationConfig = PropagationConfig(),
               w_scale: float | None = None) -> Trajectory:
    """Integrate from ``initial`` to ``cfg.z_end``.

    The decay precondition is checked on ``initial`` before noise is added.
    ``w_scale`` selects the 2D gain/loss prefactor (ignored in 1D).
    """
    if sigma not in (1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma}")
    psi = np.array(initial, dtype=complex)
    if psi.shape != g.shape:
        raise ValidationError(f"initial field shape {psi.shape} does not match grid {g.shape}")
    if not np.all(np.isfinite(psi)):
        raise ValidationError("initial field has non-finite samples")
    require_decay(psi, g, "initial field")
    if isinstance(g, Grid2D) and w_scale is None:
        w_scale = 4.0

    peak0 = float(np.abs(psi).max())
    if cfg.noise_amplitude > 0 and peak0 > 0:
        psi = psi + seed_noise(psi.shape, cfg.noise_amplitude * peak0, cfg.seed)

    V, W = periodic_samples(p, g, w_scale)
    local_coeff = 0.5j * cfg.dz * (V + 1j * W)
    half_sigma = 0.5j * cfg.dz * sigma
    if isinstance(g, Grid1D):
        ksq = g.k ** 2
    else:
        ksq = g.x.k[:, None] ** 2 + g.y.k[None, :] ** 2
    kinetic = np.exp(-1j * ksq * cfg.dz)
    ramp = absorber_profile(g, cfg.absorber_width)
    mask = np.exp(-cfg.absorber_strength * ramp * cfg.dz)
    in_absorber = ramp > 0
    dv = g.cell_volume

    zs, pw, pk, bm, snaps = [], [], [], [], []
    peak_limit = BLOWUP_FACTOR * max(float(np.max(np.abs(psi) ** 2)), np.finfo(float).tiny)

    def record(step):
        dens = np.abs(psi) ** 2
        total = float(dens.sum() * dv)
        zs.append(step * cfg.dz)
        pw.append(total)
        pk.append(float(dens.max()))
        bm.append(float(dens[in_absorber].sum() * dv / total) if total > 0 else 0.0)
        if cfg.keep_snapshots:
            snaps.append(psi.copy())

    record(0)
    blew_up, blowup_z = False, None
    for step in range(1, cfg.n_steps + 1):
        psi *= np.exp(local_coeff + half_sigma * (psi.real ** 2 + psi.imag ** 2))
        psi = np.fft.ifftn(kinetic * np.fft.fftn(psi))
        psi *= np.exp(local_coeff + half_sigma * (psi.real ** 2 + psi.imag ** 2))
        psi *= mask
        dens = psi.real ** 2 + psi.imag ** 2
        if not np.all(np.isfinite(dens)) or dens.max() > peak_limit:
            blew_up, blowup_z = True, step * cfg.dz
            break
        if step % cfg.record_stride == 0:
            record(step)

    return Trajectory(
        z=np.array(zs),
        power=np.array(pw),
        peak_intensity=np.array(pk),
        boundary_mass=np.array(bm),
        snapshots=np.array(snaps) if cfg.keep_snapshots else None,
        grid=g,
        config=cfg,
        blew_up=blew_up,
        blowup_z=blowup_z,
    )


def _require_snapshots(traj: Trajectory, minimum: int) -> np.ndarray:
    if traj.snapshots is None or len(traj.snapshots) < minimum:
        have = 0 if traj.snapshots is None else len(traj.snapshots)
        raise InsufficientDataError(f"need at least {minimum} snapshots, trajectory has {have}")
    return traj.snapshots


def aligned_deviation(traj: Trajectory, reference, lam: float) -> np.ndarray:
    """``min_theta || Psi(z) exp(-i lam z - i theta) - reference ||`` at every record.

    Removing the best global phase takes out the drift along the neutral
    phase mode, which otherwise grows linearly in ``z`` and masks the
    exponential part at early times.
    """
    snaps = _require_snapshots(traj, 1)
    ref = np.asarray(reference, dtype=complex)
    dv = traj.grid.cell_volume
    out = np.empty(len(snaps))
    for i, (z, psi) in enumerate(zip(traj.z, snaps)):
        u = psi * np.exp(-1j * lam * z)
        overlap = np.vdot(ref, u)
        if overlap != 0:
            u = u * np.exp(-1j * np.angle(overlap))
        out[i] = math.sqrt(float(np.sum(np.abs(u - ref) ** 2) * dv))
    return out


def phase_rotation_check(traj: Trajectory, lam: float, z_max: float | None = None) -> float:
    """Largest ``|arg(Psi(0, z)/Psi(0, 0)) - lam z|`` over records with ``z <= z_max``.

    The phase is unwrapped along ``z``.  Small values mean the centre of the
    beam rotates at the stationary rate.
    """
    snaps = _require_snapshots(traj, 2)
    centre = traj.grid.center_index
    z = traj.z
    keep = np.ones(len(z), bool) if z_max is None else z <= z_max
    if keep.sum() < 2:
        raise InsufficientDataError("fewer than two snapshots inside the phase window")
    values = np.array([s[centre] for s in snaps])[keep]
    if values[0] == 0:
        raise InsufficientDataError("field vanishes at the origin; phase is undefined")
    phase = np.unwrap(np.angle(values / values[0]))
    return float(np.max(np.abs(phase - lam * z[keep])))


def growth_rate_fit(traj: Trajectory, reference, lam: float, min_points: int = 10) -> float:
    """Exponent of the early exponential growth of the deviation from the mode.

    Fits ``log d(z)`` linearly, ``d`` from :func:`aligned_deviation`, over the
    first contiguous run of records with ``10 d(0) <= d <= 0.1 ||reference||``.
    Raises :class:`GrowthWindowError` when that run has fewer than
    ``min_points`` records: no growth, or growth too fast to resolve.
    """
    d = aligned_deviation(traj, reference, lam)
    ref_norm = math.sqrt(float(np.sum(np.abs(np.asarray(reference)) ** 2) * traj.grid.cell_volume))
    floor = max(d[0], 1e-14 * ref_norm)
    inside = (d >= 10.0 * floor) & (d <= 0.1 * ref_norm)
    idx = np.flatnonzero(inside)
    if idx.size == 0:
        raise GrowthWindowError("deviation never enters the growth window")
    start = idx[0]
    stop = start
    while stop + 1 < len(d) and inside[stop + 1]:
        stop += 1
    if stop - start + 1 < min_points:
        raise GrowthWindowError(
            f"growth window holds {stop - start + 1} records, need {min_points}"
        )
    slope, _ = np.polyfit(traj.z[start:stop + 1], np.log(d[start:stop + 1]), 1)
    return float(slope)


def shape_loss_classification(traj: Trajectory, reference, lam: float,
                              threshold: float = 0.1) -> str:
    """``"unstable"`` once the aligned deviation exceeds ``threshold * ||reference||``."""
    if traj.blew_up:
        return "unstable"
    d = aligned_deviation(traj, reference, lam)
    ref_norm = math.sqrt(float(np.sum(np.abs(np.asarray(reference)) ** 2) * traj.grid.cell_volume))
    return "unstable" if np.any(d > threshold * ref_norm) else "stable"
