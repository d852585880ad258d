"""Particle swarm minimization over a box."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np

from core.errors import NonFiniteLoss

logger = logging.getLogger(__name__)

T = TypeVar("T")

# spawn-key prefixes separating the initialization stream from per-step streams
_INIT_STREAM = 0
_STEP_STREAM = 1

STANDARD = {"inertia": 0.7, "c_cognitive": 1.0, "c_social": 1.0, "xi1": 2.0, "xi2": 2.0}
CONSTRICTION = {"inertia": 0.7298, "c_cognitive": 0.74809, "c_social": 0.74809, "xi1": 2.0, "xi2": 2.0}
PRESETS = {"standard": STANDARD, "constriction": CONSTRICTION}


@dataclass(frozen=True)
class PsoConfig:
    """
    Swarm settings. `bounds` is either one (low, high) pair for every coordinate or one pair per coordinate.

    Initial positions are drawn from init_bounds intersected with bounds.
    """
    n_particles: int = 20
    inertia: float = 0.7
    c_cognitive: float = 1.0
    c_social: float = 1.0
    xi1: float = 2.0
    xi2: float = 2.0
    n_iterations: int = 100
    bounds: tuple = (-np.inf, np.inf)
    init_bounds: tuple = (0.0, 1.0)
    seed: int = 0

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")
        if not 0.0 <= self.inertia <= 1.0:
            raise ValueError(f"inertia must be in [0, 1], got {self.inertia}")
        for name in ("c_cognitive", "c_social", "xi1", "xi2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.n_iterations < 1:
            raise ValueError(f"n_iterations must be >= 1, got {self.n_iterations}")

    @classmethod
    def constriction(cls, **overrides) -> "PsoConfig":
        """Constriction-factor constants (inertia 0.7298, c = 0.74809 with xi = 2), other fields from `overrides`."""
        return cls(**{**CONSTRICTION, **overrides})

    def box(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-coordinate (low, high) arrays of length `dim`."""
        return _box(self.bounds, dim, "bounds")

    def init_box(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """Initialization box: init_bounds intersected with bounds (falls back to bounds if empty)."""
        low, high = self.box(dim)
        init_low, init_high = _box(self.init_bounds, dim, "init_bounds")
        lo = np.maximum(low, init_low)
        hi = np.minimum(high, init_high)
        empty = lo >= hi
        lo[empty] = low[empty]
        hi[empty] = high[empty]
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("Initialization box must be finite")
        return lo, hi


def _box(bounds, dim: int, name: str) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(bounds, dtype=float)
    if arr.shape == (2,):
        arr = np.tile(arr, (dim, 1))
    if arr.shape != (dim, 2):
        raise ValueError(f"{name} must be a (low, high) pair or {dim} pairs, got shape {arr.shape}")
    low, high = arr[:, 0].copy(), arr[:, 1].copy()
    if not np.all(low < high):
        raise ValueError(f"{name} need low < high for every coordinate")
    return low, high


@dataclass(frozen=True, eq=False)
class SwarmState:
    """Positions, velocities and best-so-far records of the swarm at iteration t."""
    positions: np.ndarray  # (P, dim)
    velocities: np.ndarray  # (P, dim)
    pbest_positions: np.ndarray
    pbest_losses: np.ndarray  # (P,)
    gbest_position: np.ndarray
    gbest_loss: float
    iteration: int = 0

    @property
    def n_particles(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def reset_bests(self) -> "SwarmState":
        """Forget best-so-far losses (positions kept), e.g. after the loss function changed."""
        return replace(
            self,
            pbest_losses=np.full(self.n_particles, np.inf),
            gbest_loss=float("inf"),
        )


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def init_swarm(cfg: PsoConfig, dim: int) -> SwarmState:
    """Uniform positions over the initialization box, zero velocities, unevaluated bests."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    low, high = cfg.init_box(dim)
    rng = _stream(cfg.seed, _INIT_STREAM)
    positions = low + (high - low) * rng.random((cfg.n_particles, dim))

    return SwarmState(
        positions=positions,
        velocities=np.zeros_like(positions),
        pbest_positions=positions.copy(),
        pbest_losses=np.full(cfg.n_particles, np.inf),
        gbest_position=positions[0].copy(),
        gbest_loss=float("inf"),
        iteration=0,
    )


def _check_losses(losses, n_particles: int, allow_failures: bool) -> np.ndarray:
    values = np.asarray(losses, dtype=float).reshape(-1)
    if values.shape[0] != n_particles:
        raise ValueError(f"Expected {n_particles} losses, got {values.shape[0]}")
    bad = np.isnan(values) | (values == -np.inf)
    if not allow_failures:
        bad |= ~np.isfinite(values)
    if np.any(bad):
        raise NonFiniteLoss(f"Non-finite loss for particle(s) {np.flatnonzero(bad).tolist()}")
    return values


def pso_step(
    state: SwarmState, losses: Sequence[float], cfg: PsoConfig, allow_failures: bool = False
) -> SwarmState:
    """
    Record `losses` (evaluated at the current positions) and move every particle.

    V <- r V + c_cog u1 * (pbest - x) + c_soc u2 * (gbest - x), x <- x + V,
    with u1 ~ U[0, xi1]^dim and u2 ~ U[0, xi2]^dim drawn from a stream keyed by
    (seed, iteration, particle). Coordinates that leave the box are clamped and
    their velocity set to zero.

    With allow_failures, +inf marks a failed evaluation that never becomes a best.

    Raises:
        NonFiniteLoss: NaN or -inf losses (or +inf without allow_failures)
    """
    values = _check_losses(losses, state.n_particles, allow_failures)
    low, high = cfg.box(state.dim)

    pbest_positions = state.pbest_positions.copy()
    pbest_losses = state.pbest_losses.copy()
    improved = values < pbest_losses
    pbest_positions[improved] = state.positions[improved]
    pbest_losses[improved] = values[improved]

    gbest_position = state.gbest_position.copy()
    gbest_loss = state.gbest_loss
    best = int(np.argmin(pbest_losses))
    if pbest_losses[best] < gbest_loss:
        gbest_loss = float(pbest_losses[best])
        gbest_position = pbest_positions[best].copy()

    velocities = np.empty_like(state.velocities)
    for p in range(state.n_particles):
        rng = _stream(cfg.seed, _STEP_STREAM, state.iteration, p)
        u1 = rng.uniform(0.0, cfg.xi1, state.dim)
        u2 = rng.uniform(0.0, cfg.xi2, state.dim)
        x = state.positions[p]
        velocities[p] = (
            cfg.inertia * state.velocities[p]
            + cfg.c_cognitive * u1 * (pbest_positions[p] - x)
            + cfg.c_social * u2 * (gbest_position - x)
        )

    moved = state.positions + velocities
    positions = np.clip(moved, low, high)
    velocities[positions != moved] = 0.0

    return SwarmState(
        positions=positions,
        velocities=velocities,
        pbest_positions=pbest_positions,
        pbest_losses=pbest_losses,
        gbest_position=gbest_position,
        gbest_loss=gbest_loss,
        iteration=state.iteration + 1,
    )


def evaluate_swarm(
    fn: Callable[[np.ndarray], T], positions: np.ndarray, n_workers: int = 1
) -> list[T]:
    """Apply `fn` to every position, results in particle order; threads when n_workers > 1."""
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as executor:
            return list(executor.map(fn, list(positions)))
    return [fn(x) for x in positions]


def convergence_check(prev: np.ndarray, next_: np.ndarray, eta: float) -> bool:
    """True iff every particle moved by at most `eta` (Euclidean)."""
    prev = np.asarray(prev, dtype=float)
    next_ = np.asarray(next_, dtype=float)
    if prev.shape != next_.shape:
        raise ValueError(f"Position arrays differ in shape: {prev.shape} vs {next_.shape}")
    displacement = np.linalg.norm(np.atleast_2d(next_ - prev), axis=1)
    return bool(np.all(displacement <= eta))


def pso_minimize(
    loss_fn: Callable[[np.ndarray], float],
    dim: int,
    cfg: PsoConfig,
    n_workers: int = 1,
    state: Optional[SwarmState] = None,
) -> tuple[np.ndarray, float, list[float]]:
    """
    Run cfg.n_iterations swarm steps on `loss_fn`.

    Returns:
        (best position, best loss, gbest loss after every iteration)

    Raises:
        NonFiniteLoss: if loss_fn returns a non-finite value
    """
    state = state if state is not None else init_swarm(cfg, dim)
    trace = []
    for _ in range(cfg.n_iterations):
        losses = [float(v) for v in evaluate_swarm(loss_fn, state.positions, n_workers)]
        state = pso_step(state, losses, cfg)
        trace.append(state.gbest_loss)
    logger.debug(f"PSO finished after {cfg.n_iterations} iterations, best loss {state.gbest_loss:.6g}")
    return state.gbest_position.copy(), state.gbest_loss, trace
