"""Deterministic seed derivation for every random stream in a simulation.

All randomness in the simulator flows through `rng(...)` so that results are
reproducible for a fixed master seed regardless of execution order or
parallelism. Child seeds are derived by hashing the component tuple, never by
drawing from a shared generator.
"""

import hashlib

import numpy as np


def child_seed(*parts) -> int:
    """Hash a tuple of ints/strings into a stable 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, str):
            h.update(b"s")
            h.update(part.encode("utf-8"))
        else:
            h.update(b"i")
            h.update(int(part).to_bytes(16, "little", signed=True))
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "little")


def rng(*parts) -> np.random.Generator:
    """Generator seeded from the hashed component tuple."""
    return np.random.default_rng(child_seed(*parts))
