"""Deterministic seed derivation.

Per-task seeds are derived from the run seed and stable string labels so
results do not depend on scheduling order or process boundaries.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(seed: int, *labels: str) -> int:
    payload = ":".join([str(seed), *labels]).encode()
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(seed: int, *labels: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *labels))
