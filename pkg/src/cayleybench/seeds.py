"""Deterministic seed derivation: one root seed, labeled child seeds."""

from __future__ import annotations

import hashlib

import numpy as np


def child_seed(root: int, label: str) -> int:
    digest = hashlib.sha256(f"{root}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def rng(root: int, label: str) -> np.random.Generator:
    return np.random.default_rng(child_seed(root, label))
