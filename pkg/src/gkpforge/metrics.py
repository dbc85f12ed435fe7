"""Certification metrics for grid states.

Two complementary error figures live here. The *twirled* figure is an
analytic function of the envelope width alone: the error probability of an
ideal grid-state encoding whose shift noise is a centered Gaussian of that
width. The *measured* figure integrates an actual state's shift
distribution, obtained from its periodic-translation transform, outside the
correctable window. A state beats the fault-tolerance threshold when the
measured figure stays below FAULT_TOLERANCE_THRESHOLD.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ConfigurationError, NonConvergedError
from .fock import FockVector, evaluate_wavefunction, fold_half_open
from .gkp import SQRT_PI

#: Measured error probability below which concatenated encoding can correct
#: faster than it injects faults.
FAULT_TOLERANCE_THRESHOLD = 0.347

#: Envelope width whose twirled error probability sits exactly at the
#: threshold value.
THRESHOLD_DELTA = 0.32

#: The same operating point expressed in decibels of squeezing.
THRESHOLD_SQUEEZING_DB = 9.9

# Correctable shifts: within one sixth of the lattice step of a lattice
# point, in both quadratures.
_WINDOW_FRACTION = 1.0 / 6.0


def squeezing_db(delta: float) -> float:
    """Squeezing of a width-delta Gaussian peak, in dB: -10*log10(delta^2)."""
    if not delta > 0.0 or not math.isfinite(delta):
        raise ConfigurationError(f"delta must be positive, got {delta}")
    return -10.0 * math.log10(delta * delta)


def delta_from_db(squeezing: float) -> float:
    """Inverse of :func:`squeezing_db`."""
    if not math.isfinite(squeezing):
        raise ConfigurationError(f"squeezing must be finite, got {squeezing}")
    return 10.0 ** (-squeezing / 20.0)


def twirled_error_probability(delta: float) -> float:
    """Error probability of the width-delta Gaussian shift channel.

    Both quadrature shifts are independent centered Gaussians of standard
    deviation delta/sqrt(2); a shift is harmless when it lands within one
    sixth of the lattice step of zero. Closed form in terms of erf.
    """
    if not delta > 0.0 or not math.isfinite(delta):
        raise ConfigurationError(f"delta must be positive, got {delta}")
    good = math.erf(SQRT_PI * _WINDOW_FRACTION / delta)
    return 1.0 - good * good


def twirled_error_probability_quadrature(delta: float, nodes: int = 96) -> float:
    """Quadrature twin of :func:`twirled_error_probability`.

    Integrates the peak density over the correctable window, normalized over
    one full lattice cell rather than the whole line. Used as an independent
    cross-check; the two agree to better than 1e-6 for delta <= 0.5.
    """
    if not delta > 0.0 or not math.isfinite(delta):
        raise ConfigurationError(f"delta must be positive, got {delta}")
    if nodes < 16:
        raise ConfigurationError(f"need at least 16 nodes, got {nodes}")

    def mass(half_width: float) -> float:
        # Clip to where exp(-u^2/delta^2) still has weight; keeps the node
        # density adequate for any delta.
        reach = min(half_width, 8.0 * delta)
        x, w = np.polynomial.legendre.leggauss(nodes)
        u = reach * x
        return float(reach * (w @ np.exp(-(u * u) / (delta * delta))))

    return 1.0 - (mass(SQRT_PI * _WINDOW_FRACTION) / mass(SQRT_PI)) ** 2


@dataclass(frozen=True)
class ErrorProbabilityConfig:
    """Knobs for the measured error-probability integral.

    ``bound`` is the correctable-window half-width in each quadrature,
    ``quad_nodes`` the Gauss-Legendre order per axis (the result is also
    recomputed at twice this order as a convergence check). The remaining
    two override the translation-transform lattice sum and the wavefunction
    reach; both default to values sized from the state's cutoff.
    """

    bound: float = SQRT_PI * _WINDOW_FRACTION
    quad_nodes: int = 64
    lattice_halfwidth: int | None = None
    extent: float | None = None

    def __post_init__(self):
        if not 0.0 < self.bound <= SQRT_PI / 2.0 + 1e-12:
            raise ConfigurationError(
                f"bound must lie in (0, sqrt(pi)/2], got {self.bound}")
        if self.quad_nodes < 16:
            raise ConfigurationError(
                f"quad_nodes must be at least 16, got {self.quad_nodes}")
        if self.lattice_halfwidth is not None and self.lattice_halfwidth < 0:
            raise ConfigurationError("lattice_halfwidth must be >= 0")
        if self.extent is not None and not self.extent > 0.0:
            raise ConfigurationError("extent must be positive")


def _lattice_shifts(cutoff: int, cfg: ErrorProbabilityConfig) -> np.ndarray:
    extent = cfg.extent if cfg.extent is not None else math.sqrt(2.0 * cutoff) + 5.0
    available = int(math.floor((extent - SQRT_PI) / (2.0 * SQRT_PI)))
    if cfg.lattice_halfwidth is None:
        halfwidth = max(available, 0)
    else:
        halfwidth = cfg.lattice_halfwidth
        if halfwidth > available:
            raise ConfigurationError(
                f"extent {extent:.3f} covers only {available} lattice "
                f"periods, requested {halfwidth}")
    return 2.0 * SQRT_PI * np.arange(-halfwidth, halfwidth + 1)


def zak_transform(state: FockVector, u: np.ndarray, v: np.ndarray,
                  cfg: ErrorProbabilityConfig | None = None) -> np.ndarray:
    """Periodic-translation transform sampled on a u x v product grid.

    Returns the (len(v), len(u)) array of overlaps with the family of
    shifted ideal combs,

        O(u, v) = pi^(-1/4) * sum_s exp(i*2*s*sqrt(pi)*v) psi(2*s*sqrt(pi) + u),

    where psi is the position wavefunction and s runs over the lattice
    periods the state's support spans. The natural domain is one cell,
    u in (-sqrt(pi), sqrt(pi)] and v in (-sqrt(pi)/2, sqrt(pi)/2]; values
    slightly outside remain valid as the analytic continuation, with
    accuracy set by the lattice sum's reach.
    """
    cfg = cfg if cfg is not None else ErrorProbabilityConfig()
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    shifts = _lattice_shifts(state.cutoff, cfg)
    points = shifts[:, None] + u[None, :]
    psi = evaluate_wavefunction(state.amplitudes, points.ravel())
    psi = psi.reshape(points.shape)
    phases = np.exp(1j * np.outer(v, shifts))
    return math.pi ** -0.25 * (phases @ psi)


def zak_overlap(state: FockVector, u: float, v: float,
                cfg: ErrorProbabilityConfig | None = None) -> complex:
    """Single transform value with arbitrary (u, v), folded into the cell.

    Shifting u by a full lattice period 2*sqrt(pi) multiplies the transform
    by exp(-i*2*sqrt(pi)*v) per period; shifting v by its period sqrt(pi)
    leaves it unchanged. Both reductions are applied before evaluating.
    """
    u_cell = fold_half_open(u, 2.0 * SQRT_PI)
    periods = round((u - u_cell) / (2.0 * SQRT_PI))
    v_cell = fold_half_open(v, SQRT_PI)
    value = zak_transform(state, np.array([u_cell]), np.array([v_cell]), cfg)
    phase = np.exp(-2j * SQRT_PI * v_cell * periods)
    return complex(phase * value[0, 0])


def _gauss_legendre(nodes: int, low: float, high: float):
    x, w = np.polynomial.legendre.leggauss(nodes)
    mid, half = 0.5 * (high + low), 0.5 * (high - low)
    return mid + half * x, half * w


def _window_mass(state: FockVector, cfg: ErrorProbabilityConfig,
                 nodes: int, center_u: float) -> float:
    u, wu = _gauss_legendre(nodes, center_u - cfg.bound, center_u + cfg.bound)
    v, wv = _gauss_legendre(nodes, -cfg.bound, cfg.bound)
    overlap = zak_transform(state, u, v, cfg)
    return float(wv @ (np.abs(overlap) ** 2) @ wu)


def error_probability(state: FockVector,
                      cfg: ErrorProbabilityConfig | None = None,
                      label: int = 0) -> float:
    """Probability that the state's shift error escapes the correctable window.

    Integrates the squared translation transform over the window centered on
    the comb selected by ``label`` (the label-1 comb sits one half lattice
    step along u) and returns one minus that mass. The integral runs at
    ``cfg.quad_nodes`` and again at double the order; disagreement beyond
    1e-6 raises NonConvergedError carrying both values.
    """
    cfg = cfg if cfg is not None else ErrorProbabilityConfig()
    if label not in (0, 1):
        raise ConfigurationError(f"label must be 0 or 1, got {label!r}")
    if not state.is_normalized:
        raise ConfigurationError(
            "error probability is defined for normalized states only")
    center_u = label * SQRT_PI
    coarse = _window_mass(state, cfg, cfg.quad_nodes, center_u)
    refined = _window_mass(state, cfg, 2 * cfg.quad_nodes, center_u)
    if abs(refined - coarse) > 1e-6:
        raise NonConvergedError(
            f"window integral moved by {abs(refined - coarse):.3e} when the "
            f"quadrature order doubled from {cfg.quad_nodes}",
            coarse=1.0 - coarse, refined=1.0 - refined)
    return float(min(1.0, max(0.0, 1.0 - refined)))


@dataclass(frozen=True)
class QualityReport:
    """Summary of how well a synthesized state approximates its target."""

    fidelity: float
    p_error: float
    squeezing_db: float
    leakage: float
    delta: float

    def __post_init__(self):
        for name in ("fidelity", "p_error", "leakage"):
            value = getattr(self, name)
            if not -1e-9 <= value <= 1.0 + 1e-9:
                raise ConfigurationError(
                    f"{name} must be a probability, got {value}")

    def to_dict(self) -> dict:
        return asdict(self)
