"""Multi-start gradient search for circuit parameters matching a target state.

All trials advance in lockstep as columns of one batched forward/backward
pass, so the per-gate work is a single matrix product across trials instead
of a loop. Trials freeze independently (converged, plateaued, or diverged)
and drop out of the batch; the survivors keep stepping until the iteration
budget runs out. The whole procedure is deterministic for a fixed
configuration: trial t draws its starting point from a generator seeded
with rng_seed XOR t, and no other randomness enters.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams, batch_fidelity_and_gradient
from .exceptions import ConfigurationError, NonConvergedError
from .fock import FockVector

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    """Search hyperparameters.

    ``init_scale`` bounds the uniform draw of each gate angle column
    (position shift, momentum shift, quartic phase, squeeze) at the start
    of every trial. ``early_stop_infidelity`` freezes a trial that already
    matches the target well enough; ``plateau_window`` freezes one whose
    best infidelity has not improved by ``plateau_tol`` for that many
    iterations, with the learning rate halving every
    ``lr_halving_interval`` stagnant iterations on the way there.
    ``lr_decay`` is an additional global per-iteration factor, and the
    squeeze angle is clipped to ``[-squeeze_bound, squeeze_bound]`` after
    every step to keep single-gate squeezing physically modest.

    ``sim_margin`` pads the simulation basis above the target's top level.
    Without it a circuit can score well by parking amplitude where the
    truncated propagator misrepresents the physics; with the pad that
    amplitude stays inside the simulation, is orthogonal to the target,
    and costs fidelity, so the search is steered toward circuits that
    keep the state low in the ladder.
    """

    trials: int = 10
    max_iters: int = 8000
    step_size: float = 0.05
    init_scale: tuple[float, float, float, float] = (0.3, 0.3, 0.05, 0.3)
    rng_seed: int = 0
    early_stop_infidelity: float = 1e-9
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    plateau_window: int = 1500
    plateau_tol: float = 1e-6
    lr_halving_interval: int = 200
    lr_decay: float = 0.9995
    squeeze_bound: float = 3.0
    sim_margin: int = 30

    def __post_init__(self):
        if self.trials < 1 or self.max_iters < 1:
            raise ConfigurationError("trials and max_iters must be positive")
        if not self.step_size > 0.0:
            raise ConfigurationError("step_size must be positive")
        if len(self.init_scale) != 4 or any(s < 0.0 for s in self.init_scale):
            raise ConfigurationError(
                "init_scale needs four non-negative entries")
        if self.rng_seed < 0:
            raise ConfigurationError("rng_seed must be non-negative")
        if self.early_stop_infidelity < 0.0:
            raise ConfigurationError("early_stop_infidelity must be >= 0")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigurationError("beta1 and beta2 must lie in [0, 1)")
        if not self.epsilon > 0.0:
            raise ConfigurationError("epsilon must be positive")
        if self.plateau_window < 1 or self.lr_halving_interval < 1:
            raise ConfigurationError(
                "plateau_window and lr_halving_interval must be positive")
        if self.plateau_tol < 0.0:
            raise ConfigurationError("plateau_tol must be >= 0")
        if not 0.0 < self.lr_decay <= 1.0:
            raise ConfigurationError("lr_decay must lie in (0, 1]")
        if not self.squeeze_bound > 0.0:
            raise ConfigurationError("squeeze_bound must be positive")
        if self.sim_margin < 0:
            raise ConfigurationError("sim_margin must be >= 0")


@dataclass(frozen=True, eq=False)
class OptimizationRecord:
    """Everything a run produced.

    ``per_trial_history`` holds one trace per trial of
    (iteration, best-so-far infidelity) pairs; the infidelity column is
    non-increasing within each trace by construction.
    """

    best_params: CircuitParams
    best_fidelity: float
    per_trial_history: tuple[tuple[tuple[int, float], ...], ...]
    wallclock: float
    best_trial: int
    trial_fidelities: tuple[float, ...]


def optimize(target: FockVector, num_blocks: int,
             config: OptimizerConfig | None = None,
             target_delta: float = 0.0) -> OptimizationRecord:
    """Search for block-circuit parameters maximizing fidelity with target.

    The simulation runs ``config.sim_margin`` levels above the target's
    cutoff, with the target zero-padded to match, so the returned
    parameters carry the padded cutoff and replay exactly through
    :func:`circuit.forward`. ``target_delta`` is provenance only (stored
    in the returned parameters); pass the grid-state width when the
    target is one.
    """
    config = config if config is not None else OptimizerConfig()
    if not target.is_normalized:
        raise ConfigurationError("optimization target must be normalized")
    if num_blocks < 1:
        raise ConfigurationError(f"num_blocks must be >= 1, got {num_blocks}")
    started = time.perf_counter()
    cutoff = target.cutoff + config.sim_margin
    target = FockVector(np.concatenate(
        [target.amplitudes, np.zeros(config.sim_margin)]))
    trials, blocks = config.trials, num_blocks

    scale = np.asarray(config.init_scale, dtype=float)
    params = np.empty((trials, blocks, 4))
    for t in range(trials):
        rng = np.random.default_rng(config.rng_seed ^ t)
        params[t] = rng.uniform(-1.0, 1.0, size=(blocks, 4)) * scale

    moment1 = np.zeros_like(params)
    moment2 = np.zeros_like(params)
    best_loss = np.full(trials, np.inf)
    best_params = params.copy()
    last_gain = np.ones(trials, dtype=int)
    active = np.ones(trials, dtype=bool)
    histories: list[list[tuple[int, float]]] = [[] for _ in range(trials)]

    iteration = 0
    while iteration < config.max_iters and active.any():
        iteration += 1
        idx = np.flatnonzero(active)
        fids, grads = batch_fidelity_and_gradient(params[idx], cutoff, target)
        losses = 1.0 - fids
        grads = -grads  # gradient of the loss, not the fidelity

        finite = np.isfinite(losses) & np.all(np.isfinite(grads), axis=(1, 2))
        if not finite.all():
            for t in idx[~finite]:
                _log.warning("trial %d diverged at iteration %d; frozen",
                             t, iteration)
            active[idx[~finite]] = False
            idx, losses, grads = idx[finite], losses[finite], grads[finite]
            if idx.size == 0:
                continue

        gained = losses < best_loss[idx] - config.plateau_tol
        improved = losses < best_loss[idx]
        last_gain[idx[gained]] = iteration
        best_loss[idx[improved]] = losses[improved]
        best_params[idx[improved]] = params[idx[improved]]
        for t in idx:
            histories[t].append((iteration, float(best_loss[t])))

        done = best_loss[idx] <= config.early_stop_infidelity
        stale = iteration - last_gain[idx] >= config.plateau_window
        active[idx[done | stale]] = False
        keep = ~(done | stale)
        idx, losses, grads = idx[keep], losses[keep], grads[keep]
        if idx.size == 0:
            continue

        moment1[idx] = config.beta1 * moment1[idx] + (1 - config.beta1) * grads
        moment2[idx] = (config.beta2 * moment2[idx]
                        + (1 - config.beta2) * grads ** 2)
        correct1 = 1.0 - config.beta1 ** iteration
        correct2 = 1.0 - config.beta2 ** iteration
        stagnant = iteration - last_gain[idx]
        rate = (config.step_size
                * config.lr_decay ** (iteration - 1)
                * 0.5 ** (stagnant // config.lr_halving_interval))
        step = (rate[:, None, None]
                * (moment1[idx] / correct1)
                / (np.sqrt(moment2[idx] / correct2) + config.epsilon))
        params[idx] = params[idx] - step
        params[:, :, 3] = np.clip(params[:, :, 3],
                                  -config.squeeze_bound, config.squeeze_bound)

    # The last Adam step was never evaluated; give every trial one closing
    # look at its current parameters.
    fids, _ = batch_fidelity_and_gradient(params, cutoff, target)
    losses = 1.0 - fids
    closing = np.isfinite(losses) & (losses < best_loss)
    best_loss[closing] = losses[closing]
    best_params[closing] = params[closing]
    for t in np.flatnonzero(closing):
        histories[t].append((iteration + 1, float(best_loss[t])))

    if not np.isfinite(best_loss).any():
        raise NonConvergedError("every trial diverged before producing a "
                                "finite fidelity")

    winner = int(np.argmin(best_loss))
    record_params = CircuitParams(best_params[winner], cutoff,
                                  float(target_delta), config.rng_seed)
    return OptimizationRecord(
        best_params=record_params,
        best_fidelity=float(1.0 - best_loss[winner]),
        per_trial_history=tuple(tuple(trace) for trace in histories),
        wallclock=time.perf_counter() - started,
        best_trial=winner,
        trial_fidelities=tuple(float(1.0 - x) for x in best_loss),
    )
