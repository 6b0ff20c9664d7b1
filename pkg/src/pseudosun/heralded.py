"""Dynamics conditioned on detecting the partner photon at a known time.

Detecting the idler photon at herald_time collapses the signal beam into a
one-photon wavepacket whose effective field is either

- exact_quadrature: the frequency integral of the amplitude-weighted
  tanh(r) profile (evaluated on a wide sinc-lobe grid), or
- rect_approx: its analytic narrow-band limit, a rectangular pulse of
  duration entanglement_time carrying the signal-center phase, with edge
  value one half at exactly +/- half the duration.

Since the conditioned field correlation factorizes, the conditioned
trajectory is an outer product of single-excitation amplitudes and is
exactly rank one. The long-time closed form, the impulsive (zero-duration)
limit, herald-time averaging, and the two-photon coincidence observable
live here as well.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import NormalizationError, ValidationError
from .numerics import (
    C_CM_PER_FS,
    FrequencyGrid,
    TimeGrid,
    angular_frequency,
    sinc,
    trapezoid_weights,
)
from .dynamics import DensityTrajectory, MolecularSystem
from .pdc import PdcParams, squeeze_profile, vacuum_amplitude

#: Default integration window for the exact field: this many sinc lobes on
#: each side of the signal center (clipped at zero frequency), with at
#: least this many grid points per lobe.
DEFAULT_FIELD_LOBES = 50
DEFAULT_POINTS_PER_LOBE = 32


class FieldMethod(enum.Enum):
    EXACT_QUADRATURE = "exact_quadrature"
    RECT_APPROX = "rect_approx"


@dataclass(frozen=True)
class HeraldedField:
    """Complex effective-field samples on a time grid for one herald time."""

    times: TimeGrid
    herald_time: float
    amplitudes: np.ndarray
    method: FieldMethod

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.shape != (self.times.count,):
            raise ValidationError(
                f"HeraldedField: expected {self.times.count} amplitudes, got {amplitudes.shape}"
            )
        object.__setattr__(self, "amplitudes", amplitudes)


@dataclass(frozen=True)
class HeraldedTrajectory(DensityTrajectory):
    """Rank-one density trajectory conditioned on one herald time."""

    herald_time: float = 0.0

    def rank1_defect(self) -> float:
        """Largest ratio of second to leading eigenvalue over the trajectory."""
        eigenvalues = np.linalg.eigvalsh(self.matrices)
        leading = eigenvalues[:, -1]
        second = np.abs(eigenvalues[:, :-1]).max(axis=1) if self.dim > 1 else np.zeros_like(leading)
        nonzero = leading > 0
        if not np.any(nonzero):
            return 0.0
        return float(np.max(second[nonzero] / leading[nonzero]))


def default_field_grid(
    params: PdcParams,
    lobes: int = DEFAULT_FIELD_LOBES,
    points_per_lobe: int = DEFAULT_POINTS_PER_LOBE,
    time_span: float | None = None,
) -> FrequencyGrid:
    """Frequency window spanning the requested number of sinc lobes, clipped at 0.

    A field sampled on a discrete frequency grid is periodic in time with
    period 1 / (c * spacing); when time_span is given the spacing is refined
    so that period exceeds twice the span, keeping the spurious revival of
    the pulse well outside the window of interest.
    """
    lobe_width = 1.0 / (C_CM_PER_FS * params.entanglement_time)
    lo = max(0.0, params.signal_center - lobes * lobe_width)
    hi = params.signal_center + lobes * lobe_width
    spacing = lobe_width / points_per_lobe
    if time_span is not None and time_span > 0:
        spacing = min(spacing, 1.0 / (C_CM_PER_FS * 2.0 * time_span))
    count = ceil((hi - lo) / spacing) + 1
    return FrequencyGrid(lo, hi, count)


def heralded_field(
    times: TimeGrid,
    herald_time: float,
    params: PdcParams,
    grid: FrequencyGrid | None = None,
    method: FieldMethod = FieldMethod.EXACT_QUADRATURE,
) -> HeraldedField:
    """Effective field seen by the molecule when the idler fires at herald_time.

    Both methods depend on time only through t - herald_time, so shifting the
    herald shifts the whole profile.
    """
    delay = times.points - herald_time
    if method is FieldMethod.RECT_APPROX:
        amplitudes = _rect_field(delay, params)
    elif method is FieldMethod.EXACT_QUADRATURE:
        if grid is None:
            span = max(abs(times.max - herald_time), abs(herald_time - times.min))
            grid = default_field_grid(params, time_span=span)
        amplitudes = _exact_field(delay, params, grid)
    else:
        raise ValidationError(f"heralded_field: unknown method {method!r}")
    return HeraldedField(times, herald_time, amplitudes, method)


def _rect_field(delay: np.ndarray, params: PdcParams) -> np.ndarray:
    half = 0.5 * params.entanglement_time
    box = np.where(
        np.abs(delay) < half, 1.0, np.where(np.abs(delay) == half, 0.5, 0.0)
    )
    height = params.gain / (C_CM_PER_FS * params.entanglement_time)
    carrier = np.exp(-1j * angular_frequency(params.signal_center) * delay)
    return height * box * carrier


def _exact_field(delay: np.ndarray, params: PdcParams, grid: FrequencyGrid) -> np.ndarray:
    profile = _field_profile(params, grid)
    phases = np.exp(-1j * np.outer(delay, angular_frequency(grid.points)))
    return phases @ profile


def _field_profile(params: PdcParams, grid: FrequencyGrid) -> np.ndarray:
    """Quadrature weights times the amplitude-weighted tanh of the squeeze profile."""
    nu = grid.points
    weights = trapezoid_weights(grid.count, grid.spacing)
    return (
        weights
        * vacuum_amplitude(nu, params.signal_center)
        * np.tanh(squeeze_profile(nu, params))
    )


def _single_excitation_amplitudes(
    mol: MolecularSystem, times: TimeGrid, field_values: np.ndarray
) -> np.ndarray:
    """Level amplitudes (n_times, L) from a cumulative response to the field."""
    tpts = times.points
    level_ang = angular_frequency(mol.energies)
    driven = np.exp(1j * np.outer(level_ang, tpts)) * field_values[None, :]
    increments = 0.5 * times.spacing * (driven[:, 1:] + driven[:, :-1])
    cumulative = np.concatenate(
        [np.zeros((mol.size, 1), dtype=complex), np.cumsum(increments, axis=1)], axis=1
    )
    return (mol.dipoles[:, None] * np.exp(-1j * np.outer(level_ang, tpts)) * cumulative).T


def evolve_heralded(mol: MolecularSystem, field: HeraldedField) -> HeraldedTrajectory:
    """Rank-one trajectory driven by a heralded one-photon field.

    Populations sit at 0 before the pulse and stay constant after it;
    coherences keep rotating at the level splittings.
    """
    if field.times.min < 0:
        raise ValidationError(
            f"evolve_heralded: times must start at or after 0, got {field.times.min}"
        )
    phi = _single_excitation_amplitudes(mol, field.times, field.amplitudes)
    matrices = phi[:, :, None] * phi.conj()[:, None, :]
    return HeraldedTrajectory(field.times, matrices, herald_time=field.herald_time)


def long_time_closed_form(
    mol: MolecularSystem, params: PdcParams, t: float, herald_time: float
) -> np.ndarray:
    """Post-pulse density matrix in the narrow-band limit, largest diagonal scaled to 1.

    Valid once the pulse is over, t > herald_time + entanglement_time / 2.
    """
    if not t > herald_time + 0.5 * params.entanglement_time:
        raise ValidationError(
            "long_time_closed_form: requires t beyond the field support, "
            f"t > {herald_time + 0.5 * params.entanglement_time}, got {t}"
        )
    overlap = mol.dipoles * sinc(
        np.pi * C_CM_PER_FS * (mol.energies - params.signal_center) * params.entanglement_time
    )
    return _phase_rotated_outer(mol, overlap, t - herald_time)


def impulsive_limit(mol: MolecularSystem, t: float, herald_time: float) -> np.ndarray:
    """Zero-duration-pulse density matrix, largest diagonal scaled to 1."""
    return _phase_rotated_outer(mol, mol.dipoles, t - herald_time)


def _phase_rotated_outer(mol: MolecularSystem, overlap: np.ndarray, elapsed: float) -> np.ndarray:
    level_ang = angular_frequency(mol.energies)
    splitting = level_ang[:, None] - level_ang[None, :]
    matrix = np.outer(overlap, overlap) * np.exp(-1j * splitting * elapsed)
    peak = float(np.max(matrix.real.diagonal()))
    if not peak > 0:
        raise NormalizationError("closed form: all diagonal entries vanish, cannot normalize")
    return matrix / peak


def average_over_heralds(
    mol: MolecularSystem,
    params: PdcParams,
    grid: FrequencyGrid | None,
    times: TimeGrid,
    herald_samples: int,
    method: FieldMethod = FieldMethod.EXACT_QUADRATURE,
    pad: float | None = None,
    sampling: str = "uniform",
    seed: int | None = None,
) -> DensityTrajectory:
    """Equal-weight average of heralded trajectories over sampled herald times.

    Herald times cover the trajectory window padded by at least the
    entanglement time on both sides: a deterministic uniform grid by default,
    or uniform random draws when sampling="random" (seeded). The accumulation
    order is fixed, so results are reproducible. With many samples the
    average converges to the unheralded trajectory.
    """
    if int(herald_samples) != herald_samples or herald_samples < 1:
        raise ValidationError(
            f"average_over_heralds: herald_samples must be >= 1, got {herald_samples}"
        )
    if times.min < 0:
        raise ValidationError(
            f"average_over_heralds: times must start at or after 0, got {times.min}"
        )
    if pad is None:
        pad = params.entanglement_time
    if pad < params.entanglement_time:
        raise ValidationError(
            f"average_over_heralds: pad must be at least the entanglement time "
            f"({params.entanglement_time} fs), got {pad}"
        )
    lo, hi = times.min - pad, times.max + pad
    if sampling == "uniform":
        if herald_samples == 1:
            herald_times = np.array([0.5 * (lo + hi)])
        else:
            herald_times = np.linspace(lo, hi, int(herald_samples))
    elif sampling == "random":
        rng = np.random.default_rng(seed)
        herald_times = rng.uniform(lo, hi, int(herald_samples))
    else:
        raise ValidationError(
            f"average_over_heralds: sampling must be 'uniform' or 'random', got {sampling!r}"
        )

    tpts = times.points
    if method is FieldMethod.EXACT_QUADRATURE:
        if grid is None:
            grid = default_field_grid(params, time_span=hi - times.min)
        profile = _field_profile(params, grid)
        omega = angular_frequency(grid.points)
        # One-time phase matrix: per-herald fields are then a single matvec.
        base_phases = np.exp(-1j * np.outer(tpts, omega))

        def field_for(herald_time: float) -> np.ndarray:
            return base_phases @ (profile * np.exp(1j * omega * herald_time))

    elif method is FieldMethod.RECT_APPROX:

        def field_for(herald_time: float) -> np.ndarray:
            return _rect_field(tpts - herald_time, params)

    else:
        raise ValidationError(f"average_over_heralds: unknown method {method!r}")

    total = np.zeros((times.count, mol.size, mol.size), dtype=complex)
    for herald_time in herald_times:
        phi = _single_excitation_amplitudes(mol, times, field_for(float(herald_time)))
        total += phi[:, :, None] * phi.conj()[:, None, :]
    return DensityTrajectory(times, total / len(herald_times))


def coincidence_signal(mol: MolecularSystem, trajectory: DensityTrajectory) -> np.ndarray:
    """Two-photon coincidence observable: the dipole quadratic form of the trajectory.

    Real by Hermiticity (constant prefactors are left to output
    normalization); the imaginary residue is discarded here and checked in
    the test suite.
    """
    mu = mol.dipoles
    return np.einsum("a,tab,b->t", mu, trajectory.matrices, mu).real
