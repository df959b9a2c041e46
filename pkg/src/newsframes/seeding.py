"""Per-task seed derivation from one top-level seed."""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *task: object) -> int:
    """Stable 64-bit seed for ``task`` under ``seed``.

    The task path is hashed, so adding a new task never shifts the seeds of
    existing ones.
    """
    key = "\x1f".join([str(int(seed))] + [str(t) for t in task]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")
