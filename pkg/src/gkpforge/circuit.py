"""Layered gate circuits acting on the vacuum, with exact fidelity gradients.

A circuit is a stack of identical blocks. Within one block the gates act in
a fixed time order: position shift, momentum shift, quartic phase, squeeze.
Each gate is parametrized by one real angle, so a circuit of L blocks has
4L parameters arranged in an (L, 4) array whose columns follow that order.

Gradients are computed by the adjoint method: one forward sweep storing
intermediate states, one backward sweep pulling the target through inverse
gates, and an O(cutoff) banded generator product per parameter. The result
is exact for the truncated-space unitaries (no finite differences).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, DimensionMismatchError
from .fock import FockVector, gate

#: Time order of the gates inside one block.
BLOCK_GATE_KINDS = ("X", "Z", "K", "S")

#: JSON keys for one block, matching BLOCK_GATE_KINDS column for column.
BLOCK_PARAM_KEYS = ("c", "d", "k", "r")

#: A parameter set passes the leakage check when at least this much
#: probability stays below its nominal cutoff in a larger basis.
LEAKAGE_PASS_THRESHOLD = 0.996


@dataclass(frozen=True, eq=False)
class CircuitParams:
    """Parameters of one block circuit plus its build provenance.

    ``blocks`` has shape (num_blocks, 4); column g is the angle of gate
    BLOCK_GATE_KINDS[g] in every block. ``target_delta`` records which
    grid-state width the circuit was optimized for and ``seed`` the
    optimizer seed, so a parameter file is self-describing.
    """

    blocks: np.ndarray
    cutoff: int
    target_delta: float
    seed: int

    def __post_init__(self):
        blocks = np.array(self.blocks, dtype=float, copy=True)
        if blocks.ndim != 2 or blocks.shape[1] != 4 or blocks.shape[0] < 1:
            raise ConfigurationError(
                f"blocks must have shape (L, 4) with L >= 1, got {blocks.shape}")
        if not np.all(np.isfinite(blocks)):
            raise ConfigurationError("block parameters must be finite")
        if not isinstance(self.cutoff, (int, np.integer)) or self.cutoff < 1:
            raise ConfigurationError(
                f"cutoff must be a positive integer, got {self.cutoff!r}")
        if not math.isfinite(self.target_delta):
            raise ConfigurationError("target_delta must be finite")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ConfigurationError(
                f"seed must be a non-negative integer, got {self.seed!r}")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "cutoff", int(self.cutoff))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def num_blocks(self) -> int:
        return self.blocks.shape[0]

    def to_json_dict(self) -> dict:
        rows = [dict(zip(BLOCK_PARAM_KEYS, map(float, row)))
                for row in self.blocks]
        return {"delta": self.target_delta, "cutoff": self.cutoff,
                "seed": self.seed, "blocks": rows}

    @classmethod
    def from_json_dict(cls, payload: dict) -> "CircuitParams":
        try:
            rows = [[row[key] for key in BLOCK_PARAM_KEYS]
                    for row in payload["blocks"]]
            return cls(np.array(rows, dtype=float), int(payload["cutoff"]),
                       float(payload["delta"]), int(payload["seed"]))
        except (KeyError, TypeError) as exc:
            raise ConfigurationError(
                f"malformed circuit parameter payload: {exc}") from exc


def forward(params: CircuitParams) -> FockVector:
    """Run the circuit on the vacuum and return the final state."""
    state = np.zeros(params.cutoff, dtype=np.complex128)
    state[0] = 1.0
    for row in params.blocks:
        for kind, theta in zip(BLOCK_GATE_KINDS, row):
            state = gate(kind, params.cutoff).apply(float(theta), state)
    return FockVector(state)


def _scale_rows(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    return coeffs[:, None] * x if x.ndim == 2 else coeffs * x


def generator_apply(kind: str, x: np.ndarray) -> np.ndarray:
    """G @ x for the generator of ``kind``; x may be (N,) or (N, T).

    Uses the band structure of the ladder operators, so one product costs
    O(N) per column instead of a dense matrix-vector multiply.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    levels = np.arange(n, dtype=float)
    if kind == "K":
        return _scale_rows(levels ** 2, x)
    if kind == "R":
        return _scale_rows(levels + 0.5, x)
    if kind == "K_LB":
        return _scale_rows((2.0 * levels + 1.0) ** 2, x)
    out = np.zeros_like(x)
    if kind in ("X", "Z"):
        root = np.sqrt(levels[1:])
        lowered = np.zeros_like(x)
        raised = np.zeros_like(x)
        lowered[:-1] = _scale_rows(root, x[1:])
        raised[1:] = _scale_rows(root, x[:-1])
        if kind == "Z":
            return (lowered + raised) / math.sqrt(2.0)
        return 1j / math.sqrt(2.0) * (lowered - raised)
    if kind == "S":
        if n > 2:
            root = np.sqrt(levels[1:-1] * levels[2:])
            lowered = np.zeros_like(x)
            raised = np.zeros_like(x)
            lowered[:-2] = _scale_rows(root, x[2:])
            raised[2:] = _scale_rows(root, x[:-2])
            out = 0.5j * (raised - lowered)
        return out
    raise ConfigurationError(f"no banded generator for kind {kind!r}")


def fidelity_and_gradient(params: CircuitParams,
                          target: FockVector) -> tuple[float, np.ndarray]:
    """Overlap fidelity with ``target`` and its exact parameter gradient.

    Returns (fidelity, gradient) with the gradient shaped like
    ``params.blocks``. Flattened in C order it lists the derivative with
    respect to each gate angle in circuit time order.
    """
    if target.cutoff != params.cutoff:
        raise DimensionMismatchError(
            f"target cutoff {target.cutoff} != circuit cutoff {params.cutoff}")
    num = params.num_blocks
    caches = {kind: gate(kind, params.cutoff) for kind in BLOCK_GATE_KINDS}

    state = np.zeros(params.cutoff, dtype=np.complex128)
    state[0] = 1.0
    saved = [state]
    for row in params.blocks:
        for kind, theta in zip(BLOCK_GATE_KINDS, row):
            state = caches[kind].apply(float(theta), state)
            saved.append(state)

    overlap = np.vdot(target.amplitudes, saved[-1])
    fid = float(abs(overlap) ** 2)

    pulled = target.amplitudes.astype(np.complex128, copy=True)
    grad = np.zeros((num, 4))
    for j in reversed(range(4 * num)):
        block, g = divmod(j, 4)
        kind = BLOCK_GATE_KINDS[g]
        theta = float(params.blocks[block, g])
        moved = np.vdot(pulled, generator_apply(kind, saved[j + 1]))
        grad[block, g] = -2.0 * float(np.imag(np.conj(overlap) * moved))
        pulled = caches[kind].apply(-theta, pulled)
    return fid, grad


def fidelity_gradient(params: CircuitParams, target: FockVector) -> np.ndarray:
    """Flat gradient of |<target|circuit(vacuum)>|^2, one entry per angle."""
    return fidelity_and_gradient(params, target)[1].ravel()


def batch_fidelity_and_gradient(blocks_batch: np.ndarray, cutoff: int,
                                target: FockVector) -> tuple[np.ndarray, np.ndarray]:
    """Adjoint gradients for many circuits at once.

    ``blocks_batch`` has shape (batch, L, 4); every circuit shares the
    cutoff and target, so each gate becomes one matrix-matrix product over
    the batch columns. Returns (fidelities (batch,), gradients (batch, L, 4)).
    """
    blocks_batch = np.asarray(blocks_batch, dtype=float)
    if blocks_batch.ndim != 3 or blocks_batch.shape[2] != 4:
        raise ConfigurationError(
            f"blocks_batch must have shape (batch, L, 4), got {blocks_batch.shape}")
    if target.cutoff != cutoff:
        raise DimensionMismatchError(
            f"target cutoff {target.cutoff} != circuit cutoff {cutoff}")
    batch, num, _ = blocks_batch.shape
    caches = {kind: gate(kind, cutoff) for kind in BLOCK_GATE_KINDS}

    states = np.zeros((cutoff, batch), dtype=np.complex128)
    states[0] = 1.0
    saved = [states]
    for j in range(4 * num):
        block, g = divmod(j, 4)
        states = caches[BLOCK_GATE_KINDS[g]].apply_columns(
            blocks_batch[:, block, g], states)
        saved.append(states)

    overlaps = target.amplitudes.conj() @ saved[-1]
    fids = np.abs(overlaps) ** 2

    pulled = np.repeat(target.amplitudes[:, None], batch, axis=1)
    grads = np.zeros((batch, num, 4))
    for j in reversed(range(4 * num)):
        block, g = divmod(j, 4)
        kind = BLOCK_GATE_KINDS[g]
        moved = np.einsum("nt,nt->t", pulled.conj(),
                          generator_apply(kind, saved[j + 1]))
        grads[:, block, g] = -2.0 * np.imag(np.conj(overlaps) * moved)
        pulled = caches[kind].apply_columns(-blocks_batch[:, block, g], pulled)
    return fids, grads


def validate_leakage(params: CircuitParams, margin: int = 30) -> float:
    """Probability the circuit's output keeps below its nominal cutoff.

    Re-runs the same parameters in a basis enlarged by ``margin`` levels and
    measures how much weight stays within the original cutoff. A value of at
    least LEAKAGE_PASS_THRESHOLD means the nominal simulation was honest.
    """
    if margin < 10:
        raise ConfigurationError(
            f"margin must be at least 10 levels, got {margin}")
    widened = CircuitParams(params.blocks, params.cutoff + margin,
                            params.target_delta, params.seed)
    final = forward(widened).amplitudes
    return float(np.sum(np.abs(final[:params.cutoff]) ** 2))
