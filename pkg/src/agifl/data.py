"""Datasets and per-user partitioning.

Two corpora are supported: MNIST-style IDX files and synthetic Gaussian
blobs. A dataset carries a bits-per-sample figure used by the compute-time
model: raw bytes times 8, label byte included, so a 784-pixel image costs
(784 + 1) * 8 = 6280 bits.

Partitioning produces index shards, one per user, that are pairwise
disjoint and cover the dataset exactly. The IID scheme is a random
near-equal split; the label-sharded scheme sorts by label, cuts the order
into num_users * shards_per_user contiguous shards and deals
shards_per_user of them to each user, so each user sees few classes.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .seeding import child_seed

__all__ = [
    "Dataset",
    "DataShard",
    "load_idx",
    "synth_blobs",
    "partition",
    "IMAGES_MAGIC",
    "LABELS_MAGIC",
]

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


@dataclass
class Dataset:
    features: np.ndarray  # (n, d) float64 in [0, 1]
    labels: np.ndarray  # (n,) int64
    bits_per_sample: int

    def __post_init__(self):
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("feature rows and label count differ")
        if self.bits_per_sample <= 0:
            raise ValueError("bits_per_sample must be positive")

    @property
    def num_samples(self) -> int:
        return self.features.shape[0]

    @property
    def input_dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class DataShard:
    owner: int
    sample_indices: np.ndarray

    def __len__(self):
        return len(self.sample_indices)


def _read_be32(f, path):
    raw = f.read(4)
    if len(raw) != 4:
        raise ValueError(f"truncated file: {path}")
    return struct.unpack(">I", raw)[0]


def load_idx(images_path, labels_path) -> Dataset:
    """Load an IDX image/label file pair into a Dataset.

    Pixels are scaled to [0, 1] by /255. Raises ValueError on a bad magic
    number, an image/label count mismatch, or a truncated payload.
    """
    with open(images_path, "rb") as f:
        magic = _read_be32(f, images_path)
        if magic != IMAGES_MAGIC:
            raise ValueError(f"bad magic 0x{magic:08x} in {images_path} "
                             f"(expected 0x{IMAGES_MAGIC:08x})")
        count = _read_be32(f, images_path)
        rows = _read_be32(f, images_path)
        cols = _read_be32(f, images_path)
        payload = f.read(count * rows * cols)
        if len(payload) != count * rows * cols:
            raise ValueError(f"truncated file: {images_path}")
        pixels = np.frombuffer(payload, dtype=np.uint8)

    with open(labels_path, "rb") as f:
        magic = _read_be32(f, labels_path)
        if magic != LABELS_MAGIC:
            raise ValueError(f"bad magic 0x{magic:08x} in {labels_path} "
                             f"(expected 0x{LABELS_MAGIC:08x})")
        label_count = _read_be32(f, labels_path)
        raw = f.read(label_count)
        if len(raw) != label_count:
            raise ValueError(f"truncated file: {labels_path}")
        labels = np.frombuffer(raw, dtype=np.uint8).astype(np.int64)

    if label_count != count:
        raise ValueError(
            f"count mismatch: {count} images vs {label_count} labels")

    input_dim = rows * cols
    features = pixels.astype(np.float64).reshape(count, input_dim) / 255.0
    return Dataset(features=features, labels=labels,
                   bits_per_sample=(input_dim + 1) * 8)


def _blob_centers(num_classes: int, input_dim: int) -> np.ndarray:
    """Distinct per-class centers inside the unit cube.

    Centers depend only on the geometry (class count, dimension), never on
    the dataset seed, and differ across all feature dimensions so the class
    signal is distributed rather than confined to a plane. A minimum
    separation is enforced by redrawing close candidates.
    """
    if input_dim == 1:
        return ((np.arange(num_classes) + 1) / (num_classes + 1)).reshape(-1, 1)
    gen = np.random.default_rng(child_seed("blob-centers", num_classes, input_dim))
    centers = np.empty((num_classes, input_dim))
    for c in range(num_classes):
        cand = gen.uniform(0.25, 0.75, size=input_dim)
        for _ in range(200):
            if c == 0 or np.linalg.norm(centers[:c] - cand, axis=1).min() >= 0.1:
                break
            cand = gen.uniform(0.25, 0.75, size=input_dim)
        centers[c] = cand
    return centers


def synth_blobs(num_classes: int, samples_per_class: int, input_dim: int,
                spread: float, seed: int) -> Dataset:
    """Gaussian blob dataset around fixed per-class centers, clipped to
    [0, 1]. Deterministic for a fixed seed."""
    if num_classes < 1 or samples_per_class < 1 or input_dim < 1:
        raise ValueError("counts must be >= 1")
    if spread <= 0:
        raise ValueError("spread must be positive")
    gen = np.random.default_rng(seed)
    centers = _blob_centers(num_classes, input_dim)
    features = np.empty((num_classes * samples_per_class, input_dim))
    labels = np.empty(num_classes * samples_per_class, dtype=np.int64)
    for c in range(num_classes):
        block = slice(c * samples_per_class, (c + 1) * samples_per_class)
        features[block] = centers[c] + gen.normal(0.0, spread,
                                                  size=(samples_per_class, input_dim))
        labels[block] = c
    np.clip(features, 0.0, 1.0, out=features)
    return Dataset(features=features, labels=labels,
                   bits_per_sample=(input_dim + 1) * 8)


def partition(data: Dataset, num_users: int, scheme: str = "iid",
              shards_per_user: int = 2, seed: int = 0) -> list[DataShard]:
    """Split a dataset's indices across users.

    "iid": random near-equal split; the first (n mod num_users) users get
    one extra sample. "sharded": label-sorted indices cut into
    num_users * shards_per_user contiguous shards (the last shard absorbs
    any remainder), dealt shards_per_user apiece at random.
    """
    n = data.num_samples
    if num_users < 1:
        raise ValueError("num_users must be >= 1")
    if num_users > n:
        raise ValueError(f"num_users ({num_users}) exceeds sample count ({n})")
    gen = np.random.default_rng(seed)

    if scheme == "iid":
        order = gen.permutation(n)
        base, extra = divmod(n, num_users)
        shards, start = [], 0
        for u in range(num_users):
            size = base + (1 if u < extra else 0)
            shards.append(DataShard(owner=u,
                                    sample_indices=np.sort(order[start:start + size])))
            start += size
        return shards

    if scheme == "sharded":
        if shards_per_user < 1:
            raise ValueError("shards_per_user must be >= 1")
        num_shards = num_users * shards_per_user
        shard_size = n // num_shards
        if shard_size == 0:
            raise ValueError("dataset too small for the requested sharding")
        order = np.argsort(data.labels, kind="stable")
        cuts = [order[i * shard_size:(i + 1) * shard_size] for i in range(num_shards - 1)]
        cuts.append(order[(num_shards - 1) * shard_size:])
        deal = gen.permutation(num_shards)
        shards = []
        for u in range(num_users):
            mine = deal[u * shards_per_user:(u + 1) * shards_per_user]
            shards.append(DataShard(owner=u,
                                    sample_indices=np.sort(np.concatenate([cuts[i] for i in mine]))))
        return shards

    raise ValueError(f"unknown partition scheme {scheme!r}")
