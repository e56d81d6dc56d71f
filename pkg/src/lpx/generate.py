"""Random regular graphs by the configuration model."""
from __future__ import annotations

import numpy as np

from .errors import BadParametersError, DisconnectedError, GenerationFailedError
from .graph import Graph

MAX_ATTEMPTS = 10_000


def random_regular(n: int, d: int, seed: int, max_attempts: int = MAX_ATTEMPTS) -> Graph:
    """Simple connected d-regular graph on n vertices.

    Pairings with loops or repeated edges are rejected outright, as are
    disconnected results; the first acceptable pairing is returned.
    """
    if d < 3:
        raise BadParametersError(f"d must be >= 3, got {d}")
    if n <= d:
        raise BadParametersError(f"need n > d, got n={n}, d={d}")
    if (n * d) % 2:
        raise BadParametersError(f"n*d must be even, got {n}*{d}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_attempts):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        u, v = pairs.min(axis=1), pairs.max(axis=1)
        if np.any(u == v):
            continue
        key = u * n + v
        if len(np.unique(key)) != len(key):
            continue
        order = np.argsort(key)
        try:
            return Graph.from_edges(zip(u[order].tolist(), v[order].tolist()), n=n)
        except DisconnectedError:
            continue
    raise GenerationFailedError(f"no simple connected {d}-regular graph on {n} vertices after {max_attempts} attempts")
