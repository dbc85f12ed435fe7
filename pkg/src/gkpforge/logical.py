"""Encoded-qubit operations on grid states and one shift-correction round.

The lattice step along position is sqrt(pi): shifting by a full step flips
the encoded bit, shifting momentum by a full step flips the encoded phase,
and a quarter turn of phase space swaps the two quadratures. Error
correction couples a data mode to a fresh ancilla so that the ancilla's
momentum reads out the data's momentum shift modulo the lattice, then
undoes the nearest representative of that shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, GridResolutionError
from .fock import (
    _NEG_I_POW,
    FockVector,
    GateCache,
    QuadratureGrid,
    _check_tensor_dim,
    apply_gate,
    fold_half_open,
    gate,
    hermite_table,
)
from .gkp import SQRT_PI
from .metrics import error_probability

#: Quarter turn in phase space; q -> p and p -> -q with this sign.
FOURIER_ANGLE = -math.pi / 2.0


def pauli_x(state: FockVector) -> FockVector:
    """Full lattice step along position: flips the encoded bit."""
    return apply_gate("X", SQRT_PI, state)


def pauli_z(state: FockVector) -> FockVector:
    """Full lattice step along momentum: flips the encoded phase."""
    return apply_gate("Z", SQRT_PI, state)


def fourier(state: FockVector, angle: float = FOURIER_ANGLE) -> FockVector:
    """Quarter phase-space turn (the encoded Hadamard up to orientation).

    The turn direction is a convention, so the angle is exposed; four
    applications of either sign return to the start up to a global phase.
    """
    return apply_gate("R", angle, state)


@dataclass(frozen=True)
class PhaseGateDecomposition:
    """Shear strength with the rotation/squeeze angles that implement it.

    The defining relations are shear = 2*sinh(squeeze) and
    cos(rotation) = 1/sqrt(1 + exp(2*squeeze)).
    """

    shear: float
    squeeze: float
    rotation: float


def phase_gate_params(shear: float) -> PhaseGateDecomposition:
    """Decompose the momentum shear (q, p) -> (q, p + shear*q)."""
    if not math.isfinite(shear):
        raise ConfigurationError(f"shear must be finite, got {shear}")
    squeeze = math.asinh(shear / 2.0)
    rotation = math.atan2(math.exp(squeeze), 1.0)
    return PhaseGateDecomposition(shear, squeeze, rotation)


def phase_gate(state: FockVector, shear: float) -> FockVector:
    """Apply the encoded phase gate as rotate, squeeze, rotate.

    The first rotation uses the decomposition angle, the second that angle
    minus a quarter turn; together with the squeeze between them the net
    quadrature map is (q, p) -> (q, p + shear*q).
    """
    parts = phase_gate_params(shear)
    out = apply_gate("R", parts.rotation, state)
    out = apply_gate("S", parts.squeeze, out)
    return apply_gate("R", parts.rotation - math.pi / 2.0, out)


def apply_product_phase(joint: np.ndarray, theta: float,
                        first: GateCache, second: GateCache) -> np.ndarray:
    """exp(i*theta*(A x B)) acting on a two-mode state.

    ``joint`` has shape (n1, n2) with the first mode on the rows; ``first``
    and ``second`` carry the spectral forms of the single-mode Hermitian
    generators A and B. The product structure keeps everything at the
    single-mode scale: rotate each side into its eigenbasis, multiply by
    the rank-one phase table, rotate back.
    """
    joint = np.asarray(joint, dtype=np.complex128)
    if joint.ndim != 2 or joint.shape != (first.cutoff, second.cutoff):
        raise ConfigurationError(
            f"joint state shape {joint.shape} does not match gate cutoffs "
            f"({first.cutoff}, {second.cutoff})")
    out = joint
    if first.eigenvectors is not None:
        out = first.eigenvectors.conj().T @ out
    if second.eigenvectors is not None:
        out = out @ second.eigenvectors.conj()
    out = np.exp(1j * theta * np.outer(first.eigenvalues,
                                       second.eigenvalues)) * out
    if first.eigenvectors is not None:
        out = first.eigenvectors @ out
    if second.eigenvectors is not None:
        out = out @ second.eigenvectors.T
    return out


def controlled_phase(joint: np.ndarray, strength: float = 1.0) -> np.ndarray:
    """Two-mode entangler exp(i*strength*q1*q2) on a (n1, n2) joint state."""
    n1, n2 = np.asarray(joint).shape
    return apply_product_phase(joint, strength, gate("Z", n1), gate("Z", n2))


@dataclass(frozen=True, eq=False)
class ECOutcome:
    """One round of momentum-shift correction.

    ``momentum_sample`` is the ancilla measurement outcome,
    ``correction`` the momentum kick applied in response (the outcome's
    negative folded to the nearest half-open lattice cell), and the two
    error probabilities bracket the round.
    """

    momentum_sample: float
    correction: float
    post_state: FockVector
    p_error_before: float
    p_error_after: float


def _pad(state: FockVector, cutoff: int) -> FockVector:
    if cutoff < state.cutoff:
        raise ConfigurationError(
            f"cannot shrink a state from {state.cutoff} to {cutoff} levels")
    if cutoff == state.cutoff:
        return state
    amps = np.zeros(cutoff, dtype=np.complex128)
    amps[:state.cutoff] = state.amplitudes
    return FockVector(amps)


def ec_round(data: FockVector, ancilla: FockVector, rng_seed: int,
             spacing: float = 0.01,
             cutoff_pair: tuple[int, int] | None = None) -> ECOutcome:
    """Measure and undo the data mode's momentum shift via one ancilla.

    The coupling adds the data's momentum onto the ancilla's momentum while
    kicking the data's position by the ancilla's (the unavoidable
    back-action), i.e. it is generated by the data momentum times the
    ancilla position. The ancilla momentum is then read out on a uniform
    grid (outcomes snap to grid nodes), and the data gets the momentum kick
    that moves the inferred shift to the nearest lattice point.

    Sampling is the only randomness and is fully determined by rng_seed.
    """
    if cutoff_pair is not None:
        data = _pad(data, cutoff_pair[0])
        ancilla = _pad(ancilla, cutoff_pair[1])
    if not data.is_normalized or not ancilla.is_normalized:
        raise ConfigurationError(
            "both error-correction inputs must be normalized")
    n1, n2 = data.cutoff, ancilla.cutoff
    _check_tensor_dim(n1, n2)

    before = error_probability(data)

    joint = np.outer(data.amplitudes, ancilla.amplitudes)
    # Generator p1*q2: the momentum factor is minus the position-shift
    # generator, hence the -1 angle.
    joint = apply_product_phase(joint, -1.0, gate("X", n1), gate("Z", n2))

    grid = QuadratureGrid.for_cutoff(n2, spacing)
    momentum_basis = (_NEG_I_POW[np.arange(n2) % 4][:, None]
                      * hermite_table(n2, grid.points))
    sections = joint @ momentum_basis
    density = np.sum(np.abs(sections) ** 2, axis=0)
    total = float(np.trapezoid(density, grid.points))
    if abs(total - 1.0) > 1e-4:
        raise GridResolutionError(
            f"momentum density integrates to {total:.6f}; grid spacing "
            f"{grid.spacing:.4f} is too coarse or the basis too small")

    rng = np.random.default_rng(rng_seed)
    index = int(rng.choice(density.size, p=density / density.sum()))
    sample = float(grid.points[index])

    conditional = FockVector(sections[:, index]).normalized()
    correction = fold_half_open(-sample, SQRT_PI)
    corrected = apply_gate("Z", correction, conditional)
    after = error_probability(corrected)
    return ECOutcome(momentum_sample=sample, correction=correction,
                     post_state=corrected, p_error_before=before,
                     p_error_after=after)
