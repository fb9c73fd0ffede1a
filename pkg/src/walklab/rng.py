"""Deterministic random-stream plumbing.

Every stochastic routine in the package draws from a counter-based Philox
generator keyed by (seed, stream index). Streams with distinct indices are
independent, and stream `i` produces the same values no matter how many
other streams were consumed first, which is what makes trial results
independent of worker count and scheduling order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "spawn_many"]


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Return the generator for stream `index` under `seed`.

    (seed, index) fully determines the stream. Indices must be managed by
    the caller; the convention in this package is index 0 for setup-level
    choices and index 1+i for trial i.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    if index < 0:
        raise ValueError("stream index must be non-negative")
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def spawn_many(seed: int, start: int, count: int) -> list[np.random.Generator]:
    """Generators for streams start .. start+count-1."""
    return [substream(seed, start + i) for i in range(count)]
