"""Excited-state density-matrix dynamics under broadband stationary light.

The light couples the ground state to a manifold of excited levels in
first-order perturbation theory, with the interaction switched on at t = 0.
For stationary light the field enters only through its first-order
correlation function, which is the frequency integral of the weighted mean
photon number; the double time integral over that correlation collapses to
a single frequency quadrature of

    J_level(nu, t) = (exp(i*(w - w_level)*t) - 1) / (i*(w - w_level))
                   = t * exp(i*theta*t/2) * sinc(theta*t/2),

which is how it is evaluated here (the sinc form is exact and has no
singular branch). The direct double-time quadrature is kept in the test
suite as an independent oracle.

Raw trajectories carry arbitrary overall scale; figures and comparisons use
normalize_trajectory, which rescales a whole trajectory by one positive
number so a chosen reference entry peaks at 1.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, ValidationError
from .numerics import FrequencyGrid, TimeGrid, angular_frequency, sinc, trapezoid_weights
from .pdc import PhotonSpectrum, ThermalParams, thermal_mean


class NormalizationMode(enum.Enum):
    RAW = "raw"
    MAX_REPART_OFFDIAG = "max_repart_offdiag"
    MAX_DIAG = "max_diag"


@dataclass(frozen=True)
class MolecularSystem:
    """Excited levels as (transition energy in cm^-1, real transition dipole) pairs."""

    levels: tuple[tuple[float, float], ...]

    def __post_init__(self):
        levels = tuple((float(e), float(d)) for e, d in self.levels)
        if not levels:
            raise ValidationError("MolecularSystem: at least one level is required")
        for energy, _ in levels:
            if not energy > 0:
                raise ValidationError(
                    f"MolecularSystem: transition energies must be > 0, got {energy}"
                )
        object.__setattr__(self, "levels", levels)

    @property
    def size(self) -> int:
        return len(self.levels)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for e, _ in self.levels])

    @property
    def dipoles(self) -> np.ndarray:
        return np.array([d for _, d in self.levels])


@dataclass(frozen=True)
class DensityTrajectory:
    """Time series of complex Hermitian matrices over the excited-state manifold."""

    times: TimeGrid
    matrices: np.ndarray
    normalization: NormalizationMode = NormalizationMode.RAW

    def __post_init__(self):
        matrices = np.asarray(self.matrices, dtype=complex)
        if matrices.ndim != 3 or matrices.shape[0] != self.times.count:
            raise ValidationError(
                "DensityTrajectory: matrices must have shape (n_times, L, L), got "
                f"{matrices.shape}"
            )
        if matrices.shape[1] != matrices.shape[2]:
            raise ValidationError("DensityTrajectory: matrices must be square")
        object.__setattr__(self, "matrices", matrices)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def hermiticity_defect(self) -> float:
        """Largest absolute deviation from M = M-dagger over the trajectory."""
        return float(np.max(np.abs(self.matrices - self.matrices.conj().transpose(0, 2, 1))))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part over the trajectory."""
        sym = 0.5 * (self.matrices + self.matrices.conj().transpose(0, 2, 1))
        return float(np.min(np.linalg.eigvalsh(sym)))


def _amplitude_weight(spectrum: PhotonSpectrum, amplitude_ref: float | None) -> np.ndarray:
    """Trapezoid weights times the square-root-of-frequency coupling, squared.

    The reference frequency only sets an overall constant and cancels in any
    normalized output; it defaults to the grid midpoint.
    """
    if amplitude_ref is None:
        amplitude_ref = 0.5 * (spectrum.grid.min + spectrum.grid.max)
    if not amplitude_ref > 0:
        raise ValidationError(f"amplitude_ref must be > 0, got {amplitude_ref}")
    weights = trapezoid_weights(spectrum.grid.count, spectrum.grid.spacing)
    return weights * (spectrum.grid.points / amplitude_ref) * spectrum.values


def correlation_cw(
    t2: float, t1: float, spectrum: PhotonSpectrum, amplitude_ref: float | None = None
) -> complex:
    """First-order field correlation at a pair of times for stationary light.

    Frequency quadrature of exp(i*w*(t2 - t1)) times the coupling-weighted
    mean photon number; Hermitian in its time arguments.
    """
    weight = _amplitude_weight(spectrum, amplitude_ref)
    phases = np.exp(1j * angular_frequency(spectrum.grid.points) * (t2 - t1))
    return complex(np.dot(weight, phases))


def _window_kernel(theta: np.ndarray, t: float) -> np.ndarray:
    """Finite-window response (exp(i*theta*t) - 1)/(i*theta), via the exact sinc form."""
    half = 0.5 * theta * t
    return t * np.exp(1j * half) * sinc(half)


def evolve_unconditional(
    mol: MolecularSystem,
    spectrum: PhotonSpectrum,
    times: TimeGrid,
    amplitude_ref: float | None = None,
) -> DensityTrajectory:
    """Raw excited-state trajectory under stationary light switched on at t = 0.

    Populations grow linearly once t exceeds the inverse spectral bandwidth;
    coherences between levels a and b rotate at their splitting.
    """
    if times.min < 0:
        raise ValidationError(
            f"evolve_unconditional: times must start at or after 0, got {times.min}"
        )
    weight = _amplitude_weight(spectrum, amplitude_ref)
    level_ang = angular_frequency(mol.energies)
    theta = angular_frequency(spectrum.grid.points)[None, :] - level_ang[:, None]
    mu_outer = np.outer(mol.dipoles, mol.dipoles)

    matrices = np.empty((times.count, mol.size, mol.size), dtype=complex)
    for k, t in enumerate(times.points):
        kernel = _window_kernel(theta, t)
        overlap = (kernel * weight) @ kernel.conj().T
        phase = np.exp(-1j * (level_ang[:, None] - level_ang[None, :]) * t)
        matrices[k] = mu_outer * phase * overlap.conj()
    return DensityTrajectory(times, matrices)


def evolve_under_blackbody(
    mol: MolecularSystem,
    thermal: ThermalParams,
    grid: FrequencyGrid,
    times: TimeGrid,
    amplitude_ref: float | None = None,
) -> DensityTrajectory:
    """evolve_unconditional with the Bose-Einstein spectrum at the given temperature."""
    return evolve_unconditional(mol, thermal_mean(grid, thermal), times, amplitude_ref)


def normalize_trajectory(traj: DensityTrajectory, mode: NormalizationMode) -> DensityTrajectory:
    """Rescale a whole trajectory by one positive real so the reference peaks at 1.

    MAX_REPART_OFFDIAG references the real part of the off-diagonal entries,
    MAX_DIAG the diagonal entries; both take the maximum over the trajectory.
    RAW returns the trajectory unchanged.
    """
    if mode is NormalizationMode.RAW:
        return traj
    if mode is NormalizationMode.MAX_REPART_OFFDIAG:
        if traj.dim < 2:
            raise NormalizationError(
                "normalize_trajectory: no off-diagonal entries in a single-level system"
            )
        mask = ~np.eye(traj.dim, dtype=bool)
        reference = float(np.max(traj.matrices.real[:, mask]))
    elif mode is NormalizationMode.MAX_DIAG:
        diag = np.diagonal(traj.matrices.real, axis1=1, axis2=2)
        reference = float(np.max(diag))
    else:
        raise ValidationError(f"normalize_trajectory: unknown mode {mode!r}")
    if not reference > 0:
        raise NormalizationError(
            f"normalize_trajectory: reference maximum is not positive ({reference})"
        )
    # dataclasses.replace keeps the concrete type, so heralded trajectories
    # stay heralded (and keep their herald time) through normalization.
    return dataclasses.replace(traj, matrices=traj.matrices / reference, normalization=mode)
