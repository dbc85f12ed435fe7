"""Truncated Fock-basis primitives: states, operators, and gate exponentials.

Conventions used throughout the package: hbar = 1, q = (a + a^dag)/sqrt(2),
p = -i (a - a^dag)/sqrt(2), so [q, p] = i before truncation and the vacuum
has <q^2> = <p^2> = 1/2. States live in the number basis {|0>, ..., |N-1>}
where N is called the cutoff.

Every gate is the exponential U(theta) = exp(i * theta * G) of the truncated
generator G, so each U is exactly unitary on the truncated space even though
it only approximates its infinite-dimensional counterpart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    InvalidDimensionError,
    ResourceLimitError,
    UnsupportedGateError,
)

#: Largest Hilbert-space dimension a two-mode tensor product may occupy.
TENSOR_DIMENSION_CAP = 4096

#: Gate kinds accepted by :func:`gate`.
GATE_KINDS = ("X", "Z", "S", "R", "K", "K_LB")

# Exact integer powers of i and -i; complex pow would introduce roundoff.
_I_POW = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])
_NEG_I_POW = np.array([1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j])


def _check_cutoff(cutoff) -> int:
    if isinstance(cutoff, bool) or not isinstance(cutoff, (int, np.integer)):
        raise InvalidDimensionError(f"cutoff must be an integer, got {cutoff!r}")
    if cutoff < 1:
        raise InvalidDimensionError(f"cutoff must be positive, got {cutoff}")
    return int(cutoff)


@dataclass(frozen=True, eq=False)
class FockVector:
    """A state vector over the truncated number basis.

    Amplitudes are stored as a read-only complex array; use
    :meth:`normalized` to get a unit-norm copy rather than mutating.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.ndim != 1 or amps.size < 1:
            raise InvalidDimensionError("amplitudes must be a nonempty 1-D array")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm() - 1.0) <= 1e-10

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise ConfigurationError("cannot normalize the zero vector")
        return FockVector(self.amplitudes / n)

    def overlap(self, other: "FockVector") -> complex:
        """<self|other>, antilinear in self."""
        if other.cutoff != self.cutoff:
            raise DimensionMismatchError(
                f"cutoffs differ: {self.cutoff} vs {other.cutoff}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    @classmethod
    def vacuum(cls, cutoff: int) -> "FockVector":
        return cls.basis_state(0, cutoff)

    @classmethod
    def basis_state(cls, n: int, cutoff: int) -> "FockVector":
        cutoff = _check_cutoff(cutoff)
        if not 0 <= n < cutoff:
            raise InvalidDimensionError(
                f"basis index {n} outside [0, {cutoff})")
        amps = np.zeros(cutoff, dtype=np.complex128)
        amps[n] = 1.0
        return cls(amps)


def fidelity(first: FockVector, second: FockVector) -> float:
    """|<first|second>|^2 for two pure states.

    Unequal cutoffs are reconciled by zero-padding the shorter vector,
    which treats it as the same state embedded in the larger space.
    """
    a, b = first.amplitudes, second.amplitudes
    if a.size < b.size:
        a = np.concatenate([a, np.zeros(b.size - a.size, dtype=np.complex128)])
    elif b.size < a.size:
        b = np.concatenate([b, np.zeros(a.size - b.size, dtype=np.complex128)])
    return abs(np.vdot(a, b)) ** 2


def annihilation(cutoff: int) -> np.ndarray:
    """Truncated lowering operator, <n-1| a |n> = sqrt(n)."""
    cutoff = _check_cutoff(cutoff)
    mat = np.zeros((cutoff, cutoff))
    n = np.arange(1, cutoff)
    mat[n - 1, n] = np.sqrt(n)
    return mat


def creation(cutoff: int) -> np.ndarray:
    """Truncated raising operator, the transpose of :func:`annihilation`."""
    return annihilation(cutoff).T.copy()


def number_operator(cutoff: int) -> np.ndarray:
    return np.diag(np.arange(_check_cutoff(cutoff), dtype=float))


def position(cutoff: int) -> np.ndarray:
    """q = (a + a^dag)/sqrt(2); real symmetric tridiagonal."""
    a = annihilation(cutoff)
    return (a + a.T) / math.sqrt(2.0)


def momentum(cutoff: int) -> np.ndarray:
    """p = -i (a - a^dag)/sqrt(2); purely imaginary tridiagonal."""
    a = annihilation(cutoff)
    return -1j * (a - a.T) / math.sqrt(2.0)


def expectation(operator: np.ndarray, state: FockVector) -> complex:
    """<state| operator |state>."""
    if operator.shape != (state.cutoff, state.cutoff):
        raise DimensionMismatchError(
            f"operator shape {operator.shape} does not match cutoff {state.cutoff}")
    return complex(np.vdot(state.amplitudes, operator @ state.amplitudes))


@dataclass(frozen=True, eq=False)
class GateCache:
    """Spectral form of one gate generator at a fixed cutoff.

    ``eigenvectors`` is None for generators that are diagonal in the number
    basis; applying those is a pure phase multiply.
    """

    kind: str
    cutoff: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        if self.eigenvectors is not None:
            self.eigenvectors.setflags(write=False)

    def apply(self, theta: float, state: np.ndarray) -> np.ndarray:
        """exp(i*theta*G) @ state for one column (N,) or a batch (N, T).

        theta == 0.0 short-circuits to an exact copy so that identity gates
        introduce no roundoff at all.
        """
        state = np.asarray(state)
        if state.shape[0] != self.cutoff:
            raise DimensionMismatchError(
                f"state has {state.shape[0]} levels, gate built for {self.cutoff}")
        if theta == 0.0:
            return state.astype(np.complex128, copy=True)
        phases = np.exp(1j * theta * self.eigenvalues)
        if state.ndim == 2:
            phases = phases[:, None]
        if self.eigenvectors is None:
            return phases * state
        vecs = self.eigenvectors
        return vecs @ (phases * (vecs.conj().T @ state))

    def apply_columns(self, thetas: np.ndarray, states: np.ndarray) -> np.ndarray:
        """exp(i*thetas[t]*G) applied to column t of states, shape (N, T)."""
        thetas = np.asarray(thetas, dtype=float)
        states = np.asarray(states)
        if states.ndim != 2 or states.shape[0] != self.cutoff:
            raise DimensionMismatchError(
                f"expected a (levels, batch) array with {self.cutoff} levels, "
                f"got shape {states.shape}")
        if thetas.shape != (states.shape[1],):
            raise DimensionMismatchError(
                f"need one angle per column, got {thetas.shape} angles for "
                f"{states.shape[1]} columns")
        phases = np.exp(1j * np.outer(self.eigenvalues, thetas))
        if self.eigenvectors is None:
            return phases * states
        vecs = self.eigenvectors
        return vecs @ (phases * (vecs.conj().T @ states))

    def unitary(self, theta: float) -> np.ndarray:
        """Dense matrix of exp(i*theta*G)."""
        phases = np.exp(1j * theta * self.eigenvalues)
        if self.eigenvectors is None:
            return np.diag(phases)
        vecs = self.eigenvectors
        return (vecs * phases) @ vecs.conj().T

    def generator_matrix(self) -> np.ndarray:
        """Dense Hermitian G rebuilt from the defining operators.

        Independent of the stored eigendecomposition, so reconstructing
        U(theta) from this matrix cross-checks the spectral path.
        """
        n = np.arange(self.cutoff, dtype=float)
        if self.kind == "R":
            return np.diag(n + 0.5).astype(np.complex128)
        if self.kind == "K":
            return np.diag(n ** 2).astype(np.complex128)
        if self.kind == "K_LB":
            return np.diag((2.0 * n + 1.0) ** 2).astype(np.complex128)
        if self.kind == "Z":
            return position(self.cutoff).astype(np.complex128)
        if self.kind == "X":
            return -momentum(self.cutoff)
        q, p = position(self.cutoff), momentum(self.cutoff)
        return (q @ p + p @ q) / 2.0


@lru_cache(maxsize=32)
def gate(kind: str, cutoff: int) -> GateCache:
    """Diagonalized generator for U(theta) = exp(i*theta*G).

    Generators by kind:

    - ``"X"``:    G = -p, so U(c) shifts q by +c.
    - ``"Z"``:    G = q, so U(d) shifts p by +d.
    - ``"S"``:    G = (qp + pq)/2, so U(r) rescales q by exp(-r).
    - ``"R"``:    G = n + 1/2 (phase-space rotation).
    - ``"K"``:    G = n^2 (diagonal Kerr-type nonlinearity).
    - ``"K_LB"``: G = (2n + 1)^2 (quartic-form nonlinearity; equals a "K"
      and "R" combination up to a global phase on the truncated space).

    Diagonal generators skip the eigensolver. The off-diagonal ones reduce
    to a real symmetric eigenproblem: q is already real tridiagonal, and
    -p and (qp+pq)/2 are unitarily equivalent to real matrices via the
    diagonal twists diag(i^n) and diag(exp(i*pi*n/4)).
    """
    if kind not in GATE_KINDS:
        raise UnsupportedGateError(
            f"unknown gate kind {kind!r}; expected one of {GATE_KINDS}")
    cutoff = _check_cutoff(cutoff)
    n = np.arange(cutoff)
    if kind == "R":
        return GateCache(kind, cutoff, n + 0.5, None)
    if kind == "K":
        return GateCache(kind, cutoff, n.astype(float) ** 2, None)
    if kind == "K_LB":
        return GateCache(kind, cutoff, (2.0 * n + 1.0) ** 2, None)
    if kind in ("X", "Z"):
        vals, vecs = np.linalg.eigh(position(cutoff))
        if kind == "Z":
            return GateCache(kind, cutoff, vals, vecs.astype(np.complex128))
        twist = _I_POW[n % 4]
        return GateCache(kind, cutoff, -vals, twist[:, None] * vecs)
    # "S": twist away the phases, leaving a real symmetric pentadiagonal core.
    core = np.zeros((cutoff, cutoff))
    k = np.arange(cutoff - 2)
    core[k + 2, k] = np.sqrt((k + 1.0) * (k + 2.0)) / 2.0
    core[k, k + 2] = core[k + 2, k]
    vals, vecs = np.linalg.eigh(core)
    twist = np.exp(1j * np.pi * n / 4.0)
    return GateCache(kind, cutoff, vals, twist[:, None] * vecs)


def apply_gate(kind: str, theta: float, state: FockVector) -> FockVector:
    """Convenience wrapper: U(theta) |state> as a new FockVector."""
    return FockVector(gate(kind, state.cutoff).apply(theta, state.amplitudes))


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Symmetric uniform grid for wavefunction evaluation.

    ``spacing`` is the realized step, never larger than the requested one,
    and the grid always contains 0.0 exactly.
    """

    points: np.ndarray
    spacing: float
    extent: float

    def __post_init__(self):
        self.points.setflags(write=False)

    @classmethod
    def for_cutoff(cls, cutoff: int, spacing: float = 0.02) -> "QuadratureGrid":
        """Grid reaching past the classical turning point of level cutoff-1."""
        cutoff = _check_cutoff(cutoff)
        if not spacing > 0.0:
            raise ConfigurationError(f"spacing must be positive, got {spacing}")
        extent = math.sqrt(2.0 * cutoff) + 5.0
        half = math.ceil(extent / spacing)
        points = np.linspace(-extent, extent, 2 * half + 1)
        return cls(points, extent / half, extent)


def hermite_table(num_levels: int, x: np.ndarray) -> np.ndarray:
    """Normalized Hermite functions h_n(x) for n < num_levels.

    Returns shape (num_levels, len(x)). These are the position-basis
    amplitudes <x|n>, built with the stable two-term recurrence; entries
    underflow harmlessly to zero far outside the classically allowed
    region.
    """
    num_levels = _check_cutoff(num_levels)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    table = np.zeros((num_levels, x.size))
    table[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if num_levels > 1:
        table[1] = math.sqrt(2.0) * x * table[0]
    for n in range(2, num_levels):
        table[n] = (x * math.sqrt(2.0 / n) * table[n - 1]
                    - math.sqrt((n - 1.0) / n) * table[n - 2])
    return table


def evaluate_wavefunction(amplitudes: np.ndarray, x: np.ndarray,
                          basis: str = "position") -> np.ndarray:
    """Wavefunction values at points x from number-basis amplitudes.

    basis="momentum" uses <p|n> = (-i)^n h_n(p).
    """
    if basis not in ("position", "momentum"):
        raise ConfigurationError(
            f"basis must be 'position' or 'momentum', got {basis!r}")
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.ndim != 1:
        raise InvalidDimensionError("amplitudes must be 1-D")
    if basis == "momentum":
        amps = amps * _NEG_I_POW[np.arange(amps.size) % 4]
    return amps @ hermite_table(amps.size, x)


def wavefunction(state: FockVector, grid: QuadratureGrid,
                 basis: str = "position") -> np.ndarray:
    """State's wavefunction sampled on the given grid."""
    return evaluate_wavefunction(state.amplitudes, grid.points, basis)


def _check_tensor_dim(dim_a: int, dim_b: int) -> None:
    if dim_a * dim_b > TENSOR_DIMENSION_CAP:
        raise ResourceLimitError(
            f"two-mode dimension {dim_a}*{dim_b}={dim_a * dim_b} exceeds the "
            f"cap of {TENSOR_DIMENSION_CAP}")


def tensor(first: FockVector, second: FockVector) -> FockVector:
    """Two-mode product state; the first factor varies slowest."""
    _check_tensor_dim(first.cutoff, second.cutoff)
    return FockVector(np.kron(first.amplitudes, second.amplitudes))


def tensor_op(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Two-mode operator product with the same index order as :func:`tensor`."""
    _check_tensor_dim(first.shape[0], second.shape[0])
    return np.kron(first, second)


def fold_half_open(x: float, period: float) -> float:
    """Fold x into the half-open interval (-period/2, period/2].

    The upper edge maps to itself and the lower edge maps up to +period/2,
    which keeps lattice-midpoint values on one deterministic side.
    """
    if not period > 0.0:
        raise ConfigurationError(f"period must be positive, got {period}")
    half = 0.5 * period
    return half - ((half - x) % period)
