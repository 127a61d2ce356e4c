"""The FedAvg protocol engine.

One round: sample a client cohort uniformly at random, train each selected
client from the current global parameters on its own shard, then replace
the global model with the sample-count-weighted mean of the local results.
Per-client training seeds are derived from (master seed, round, user id),
so the outcome does not depend on the order clients are processed in.
"""

from dataclasses import dataclass, replace

import numpy as np

from .data import Dataset, DataShard
from .models import Hyperparams, ModelSpec, local_train
from .seeding import child_seed, rng as _rng

__all__ = ["FlConfig", "FlState", "select_clients", "aggregate", "run_round"]


@dataclass(frozen=True)
class FlConfig:
    num_users: int = 100
    fraction: float = 0.02
    hyper: Hyperparams = Hyperparams()
    max_rounds: int = 100

    def __post_init__(self):
        if self.num_users < 1:
            raise ValueError("num_users must be >= 1")
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError("fraction must be in (0, 1]")
        if self.max_rounds < 0:
            raise ValueError("max_rounds must be >= 0")


@dataclass(frozen=True)
class FlState:
    global_params: np.ndarray
    round_index: int
    master_seed: int


def cohort_size(num_users: int, fraction: float) -> int:
    """Selected clients per round: max(1, round(fraction * num_users))."""
    return max(1, round(fraction * num_users))


def select_clients(num_users: int, fraction: float,
                   generator: np.random.Generator) -> np.ndarray:
    """Uniform sample without replacement, returned sorted."""
    m = cohort_size(num_users, fraction)
    return np.sort(generator.choice(num_users, size=m, replace=False))


def aggregate(updates) -> np.ndarray:
    """Coordinate-wise weighted mean of (params, n_samples) pairs.

    Weights are normalized counts n_k / sum(n), so a singleton aggregate
    returns its input exactly and scaling every count by a constant leaves
    the result unchanged.
    """
    updates = list(updates)
    if not updates:
        raise ValueError("no updates to aggregate")
    length = updates[0][0].shape[0]
    counts = np.array([float(n) for _, n in updates])
    if np.any(counts < 1):
        raise ValueError("all sample counts must be >= 1")
    for params, _ in updates:
        if params.shape != (length,):
            raise ValueError("parameter vectors differ in length")
    weights = counts / counts.sum()
    stacked = np.stack([params for params, _ in updates])
    return weights @ stacked


def run_round(state: FlState, config: FlConfig, shards: list[DataShard],
              spec: ModelSpec, data: Dataset):
    """Execute one FedAvg round.

    Returns (new_state, selected user ids, local updates) where the
    updates are the (params, n_samples) pairs that were aggregated; the
    timing and energy layers consume the selected ids and shard sizes.
    """
    if len(shards) != config.num_users:
        raise ValueError("one shard per user is required")
    selected = select_clients(config.num_users, config.fraction,
                              _rng(state.master_seed, state.round_index, "select"))
    updates = []
    for user in selected:
        shard = shards[user]
        seed = child_seed(state.master_seed, state.round_index, int(user), "train")
        params = local_train(state.global_params,
                             data.features[shard.sample_indices],
                             data.labels[shard.sample_indices],
                             spec, config.hyper, seed)
        updates.append((params, len(shard)))
    new_state = replace(state, global_params=aggregate(updates),
                        round_index=state.round_index + 1)
    return new_state, selected, updates
