"""Deterministic RNG seed derivation.

Every stage and every (builder, config, model, target) cell draws its
seed from the master seed plus a string key, so results are independent
of scheduling order and reproducible across runs and platforms.
"""

from __future__ import annotations

import hashlib


def derive_seed(master_seed, *parts):
    key = "|".join([str(int(master_seed))] + [str(p) for p in parts])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
