"""Approximate grid (GKP) states in the truncated number basis.

A grid state here is a finite comb of position-squeezed peaks on the lattice
x_j = (2j + mu) * sqrt(pi), each peak of width delta, under a Gaussian
envelope exp(-delta^2 x^2 / 2). Number-basis coefficients come from direct
quadrature of the comb wavefunction against the Hermite functions, so every
kept amplitude is the amplitude of the untruncated state and the honest
total loss (envelope tail plus basis truncation) is measured against the
closed-form norm of the untruncated comb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, CutoffTooSmallError, ResourceLimitError
from .fock import FockVector, _check_cutoff, evaluate_wavefunction, hermite_table

SQRT_PI = math.sqrt(math.pi)

#: Largest tolerable fraction of the ideal comb lost to envelope truncation
#: and basis truncation combined when building a target state.
MAX_TRUNCATION_LOSS = 0.10

_LOGICAL_LABELS = (0, 1, "H")

_H_ZERO_PHASE = complex(np.exp(-1j * math.pi / 8.0))
_H_ONE_PHASE = complex(np.exp(1j * math.pi / 8.0))

_SEARCH_START = 8
_SEARCH_CAP = 400
_PAIR_FIDELITY = 0.999
_RUN_LENGTH = 6


def squeezed_vacuum(delta: float, cutoff: int) -> FockVector:
    """Position-squeezed vacuum of wavefunction width delta, cut at cutoff.

    The amplitudes are the exact infinite-dimensional coefficients, so the
    vector is deliberately NOT renormalized: its norm shortfall is exactly
    the probability the untruncated state keeps above the cutoff.
    """
    if not delta > 0.0:
        raise ConfigurationError(f"delta must be positive, got {delta}")
    cutoff = _check_cutoff(cutoff)
    ratio = -(1.0 - delta * delta) / (1.0 + delta * delta)  # -tanh of squeeze
    amps = np.zeros(cutoff, dtype=np.complex128)
    amps[0] = math.sqrt(2.0 * delta / (1.0 + delta * delta))
    for n in range(0, cutoff - 2, 2):
        amps[n + 2] = ratio * math.sqrt((n + 1.0) / (n + 2.0)) * amps[n]
    return FockVector(amps)


def _lattice(mu: int, x_max: float) -> np.ndarray:
    """All points (2j + mu) * sqrt(pi) with |x| <= x_max, ascending."""
    lo = math.ceil((-x_max / SQRT_PI - mu) / 2.0)
    hi = math.floor((x_max / SQRT_PI - mu) / 2.0)
    j = np.arange(lo, hi + 1)
    return (2.0 * j + mu) * SQRT_PI


def _ideal_norm(delta: float, mu: int) -> float:
    """Squared norm of the untruncated comb, from pairwise peak overlaps."""
    xs = _lattice(mu, 9.0 / delta)
    weights = np.exp(-0.5 * (delta * xs) ** 2)
    diff = xs[:, None] - xs[None, :]
    return float(weights @ np.exp(-diff ** 2 / (4.0 * delta * delta)) @ weights)


def _comb_coefficients(delta: float, mu: int, levels: int,
                       spacing: float | None = None) -> np.ndarray:
    """Exact number-basis coefficients c_0 .. c_{levels-1} of the comb.

    Each coefficient is the quadrature overlap of the full (untruncated)
    comb wavefunction with one Hermite function, so no entry suffers basis
    truncation. The grid spans every level's classically allowed region;
    peaks beyond the grid cannot reach any kept level and are dropped.
    """
    extent = math.sqrt(2.0 * levels) + 6.0
    if spacing is None:
        spacing = min(0.02, delta / 8.0)
    half = math.ceil(extent / spacing)
    xs = np.linspace(-extent, extent, 2 * half + 1)
    lattice = _lattice(mu, extent + 8.0 * delta)
    weights = np.exp(-0.5 * (delta * lattice) ** 2)
    peaks = np.exp(-(xs[:, None] - lattice[None, :]) ** 2
                   / (2.0 * delta * delta))
    psi = (math.pi * delta * delta) ** -0.25 * (peaks @ weights)
    return (hermite_table(levels, xs) @ psi) * (extent / half)


@dataclass(frozen=True, eq=False)
class TargetBuild:
    """A built target state together with its honest truncation loss."""

    state: FockVector
    delta: float
    label: int | str
    leakage: float


def _build_comb(delta: float, cutoff: int, mu: int,
                enforce_leakage: bool) -> tuple[FockVector, float]:
    raw = _comb_coefficients(delta, mu, cutoff)
    kept = float(raw @ raw)
    leakage = max(0.0, 1.0 - kept / _ideal_norm(delta, mu))
    if enforce_leakage and leakage > MAX_TRUNCATION_LOSS:
        extra = math.log(leakage / MAX_TRUNCATION_LOSS) / (2.0 * delta * delta)
        raise CutoffTooSmallError(
            f"cutoff {cutoff} keeps only {1.0 - leakage:.4f} of the ideal comb "
            f"(loss {leakage:.4f} > {MAX_TRUNCATION_LOSS})",
            required_cutoff=cutoff + math.ceil(extra))
    trunc = raw / math.sqrt(kept)
    anchor = 0.0 if mu == 0 else SQRT_PI
    if evaluate_wavefunction(trunc, np.array([anchor]))[0].real < 0.0:
        trunc = -trunc
    return FockVector(trunc), leakage


def build_target(delta: float, cutoff: int, label: int | str = 0,
                 enforce_leakage: bool = True) -> TargetBuild:
    """Build a normalized grid state with its truncation diagnostics.

    label 0 and 1 pick the two computational combs; label "H" is the equal
    superposition exp(-i*pi/8)|0> + exp(i*pi/8)|1>, renormalized (the two
    combs are not orthogonal at finite delta).

    Raises CutoffTooSmallError when more than MAX_TRUNCATION_LOSS of the
    ideal comb falls outside the requested basis, unless enforce_leakage is
    False.
    """
    if not 0.0 < delta <= 1.0:
        raise ConfigurationError(
            f"delta must lie in (0, 1] for a grid-state target, got {delta}")
    cutoff = _check_cutoff(cutoff)
    if label not in _LOGICAL_LABELS:
        raise ConfigurationError(
            f"label must be one of {_LOGICAL_LABELS}, got {label!r}")
    if label in (0, 1):
        state, leakage = _build_comb(delta, cutoff, label, enforce_leakage)
        return TargetBuild(state, delta, label, leakage)
    zero, leak0 = _build_comb(delta, cutoff, 0, enforce_leakage)
    one, leak1 = _build_comb(delta, cutoff, 1, enforce_leakage)
    mixed = (_H_ZERO_PHASE * zero.amplitudes + _H_ONE_PHASE * one.amplitudes)
    state = FockVector(mixed).normalized()
    return TargetBuild(state, delta, "H", max(leak0, leak1))


def target_state(delta: float, cutoff: int, label: int | str = 0,
                 enforce_leakage: bool = True) -> FockVector:
    """The normalized grid state alone; see :func:`build_target`."""
    return build_target(delta, cutoff, label, enforce_leakage).state


def _comb_cutoff_for_leakage(delta: float, mu: int, max_leakage: float) -> int:
    ideal = _ideal_norm(delta, mu)
    # envelope tail falls like exp(-2*delta^2*n); start generous, then grow
    levels = min(1024, math.ceil(12.5 / (2.0 * delta * delta)) + 32)
    while True:
        cum = np.cumsum(_comb_coefficients(delta, mu, levels) ** 2)
        leak = 1.0 - cum / ideal
        if leak[-1] <= max_leakage:
            return int(np.argmax(leak <= max_leakage)) + 1
        if levels >= 1024:
            extra = math.log(leak[-1] / max_leakage) / (2.0 * delta * delta)
            raise CutoffTooSmallError(
                f"no cutoff at or below 1024 keeps leakage within "
                f"{max_leakage} for delta={delta}",
                required_cutoff=levels + math.ceil(extra))
        levels = min(1024, math.ceil(levels * 1.5))


def cutoff_for_leakage(delta: float, max_leakage: float = 1e-4,
                       label: int | str = 0) -> int:
    """Smallest cutoff whose target keeps all but max_leakage of the comb.

    This is the honest basis size for quantitative work on the target: the
    settling scan (:func:`select_cutoff`) can stop inside a lull between
    lattice peaks' energy bands while percent-level weight still lies above
    the basis, which distorts error-probability estimates.
    """
    if not 0.0 < delta <= 1.0:
        raise ConfigurationError(
            f"delta must lie in (0, 1] for a grid-state target, got {delta}")
    if not 0.0 < max_leakage < 1.0:
        raise ConfigurationError(
            f"max_leakage must lie in (0, 1), got {max_leakage}")
    if label not in _LOGICAL_LABELS:
        raise ConfigurationError(
            f"label must be one of {_LOGICAL_LABELS}, got {label!r}")
    if label in (0, 1):
        return _comb_cutoff_for_leakage(delta, label, max_leakage)
    return max(_comb_cutoff_for_leakage(delta, 0, max_leakage),
               _comb_cutoff_for_leakage(delta, 1, max_leakage))


def _mixed_truncation(raw0: np.ndarray, raw1: np.ndarray, m: int) -> np.ndarray:
    """The label-"H" state at cutoff m, from full coefficient vectors."""
    zero = raw0[:m] / np.linalg.norm(raw0[:m])
    one = raw1[:m] / np.linalg.norm(raw1[:m])
    mixed = _H_ZERO_PHASE * zero + _H_ONE_PHASE * one
    return mixed / np.linalg.norm(mixed)


def select_cutoff(delta: float, label: int | str = 0) -> int:
    """Smallest cutoff at which the target state has numerically settled.

    Returns the first cutoff m where the fidelity between the states built
    at consecutive cutoffs stays above 0.999 for six increments in a row
    (pairs m..m+5). Comb weight arrives in bursts, one energy band per
    lattice peak, so a single clean pair proves nothing; the six-pair run
    guards against stopping inside a lull between bursts. The scan works on
    one converged coefficient vector, so its outcome depends only on the
    number-basis content of the state, not on any grid resolution.
    """
    if not 0.05 <= delta <= 0.5:
        raise ConfigurationError(
            f"delta must lie in [0.05, 0.5] for cutoff selection, got {delta}")
    if label not in _LOGICAL_LABELS:
        raise ConfigurationError(
            f"label must be one of {_LOGICAL_LABELS}, got {label!r}")
    levels = _SEARCH_CAP + _RUN_LENGTH + 2
    if label in (0, 1):
        raw = _comb_coefficients(delta, label, levels)
        cum = np.cumsum(raw * raw)

        def pair_fidelity(m: int) -> float:
            return cum[m - 1] / cum[m]
    else:
        raw0 = _comb_coefficients(delta, 0, levels)
        raw1 = _comb_coefficients(delta, 1, levels)

        def pair_fidelity(m: int) -> float:
            short = _mixed_truncation(raw0, raw1, m)
            longer = _mixed_truncation(raw0, raw1, m + 1)
            return abs(np.vdot(short, longer[:m])) ** 2

    run = 0
    run_start = None
    for n in range(_SEARCH_START + 1, _SEARCH_CAP + 1):
        if pair_fidelity(n - 1) > _PAIR_FIDELITY:
            if run == 0:
                run_start = n - 1
            run += 1
            if run >= _RUN_LENGTH:
                return run_start
        else:
            run = 0
    raise ResourceLimitError(
        f"no settled cutoff below the search cap of {_SEARCH_CAP} "
        f"for delta={delta}")
