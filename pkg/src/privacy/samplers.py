"""
Noise samplers and named random substreams.

Every sampler is a pure function of (generator state, parameters). Substreams
are derived from a root seed and a key path through ``numpy.random.SeedSequence``
so that, e.g., the noise of node v in round r is the same no matter which
algorithm requests it.
"""
import hashlib
from typing import Optional, Tuple, Union

import numpy as np

from ..utils.error_handler import InvalidArgumentError

KeyPart = Union[int, str]


def _key_int(part: KeyPart) -> int:
    if isinstance(part, (int, np.integer)) and part >= 0:
        return int(part)
    digest = hashlib.sha256(str(part).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


class RngStreams:
    """Splittable source of named, reproducible ``numpy.random.Generator`` substreams."""

    def __init__(self, root_seed: int, prefix: Tuple[KeyPart, ...] = ()):
        self.root_seed = int(root_seed)
        self.prefix = tuple(prefix)

    def child(self, *key: KeyPart) -> "RngStreams":
        """Namespace every later substream under ``key``."""
        return RngStreams(self.root_seed, self.prefix + tuple(key))

    def generator(self, *key: KeyPart) -> np.random.Generator:
        spawn_key = tuple(_key_int(part) for part in self.prefix + tuple(key))
        return np.random.default_rng(np.random.SeedSequence(entropy=self.root_seed, spawn_key=spawn_key))

    def __repr__(self) -> str:
        return f"RngStreams(root_seed={self.root_seed}, prefix={self.prefix})"


def gaussian_sample(rng: np.random.Generator, std: float, size: Optional[int] = None):
    """N(0, std^2); std = 0 returns exact zeros."""
    if std < 0:
        raise InvalidArgumentError(f"gaussian std must be nonnegative, got {std}")
    if std == 0:
        return 0.0 if size is None else np.zeros(size)
    return rng.normal(0.0, std, size=size)


def sym_geometric_sample(rng: np.random.Generator, gamma: float, size: Optional[int] = None):
    """
    Two-sided geometric noise Geom(gamma): P(k) = (gamma-1)/(gamma+1) * gamma^-|k|.

    Drawn as the difference of two i.i.d. geometric variables with success
    probability 1 - 1/gamma. ``gamma = inf`` is the zero-noise limit.
    """
    if not gamma > 1:
        raise InvalidArgumentError(f"geometric parameter gamma must exceed 1, got {gamma}")
    if np.isinf(gamma):
        return 0 if size is None else np.zeros(size, dtype=np.int64)
    p = -np.expm1(-np.log(gamma))
    draws = rng.geometric(p, size=size) - rng.geometric(p, size=size)
    return int(draws) if size is None else draws.astype(np.int64)


def laplace_sample(rng: np.random.Generator, b: float, size: Optional[int] = None):
    """Lap(b); b = 0 returns exact zeros."""
    if b < 0:
        raise InvalidArgumentError(f"laplace scale must be nonnegative, got {b}")
    if b == 0:
        return 0.0 if size is None else np.zeros(size)
    return rng.laplace(0.0, b, size=size)


def geometric_count(rng: np.random.Generator, gamma: float) -> int:
    """Number of trials until first success, success probability gamma (support 1, 2, ...)."""
    if not 0 < gamma < 1:
        raise InvalidArgumentError(f"success probability gamma must lie in (0, 1), got {gamma}")
    return int(rng.geometric(gamma))
