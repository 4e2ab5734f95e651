"""Seedable random stream with Box-Muller Gaussian sampling."""

import numpy as np

from .errors import DomainError

_SEED_BOUND = 1 << 64


class RandomStream:
    """Deterministic stream of uniform and Gaussian draws.

    Uniforms come from a PCG64 generator seeded with a 64-bit integer; normal
    variates are produced from pairs of uniforms by the Box-Muller transform.
    A stream is meant to have a single owner; derive independent streams with
    :meth:`spawn_seed` rather than sharing one across workers.
    """

    def __init__(self, seed):
        seed = int(seed)
        if not 0 <= seed < _SEED_BOUND:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.counter = 0
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, counter={self.counter})"

    def uniform(self, size):
        """Uniform draws on [0, 1)."""
        out = self._gen.random(size)
        self.counter += int(np.prod(size))
        return out

    def normal(self, size):
        """Standard real normal draws."""
        n = int(np.prod(size))
        z = self.complex_normal((n + 1) // 2)
        return np.concatenate([z.real, z.imag])[:n].reshape(size)

    def complex_normal(self, shape):
        """Complex Gaussians with independent N(0, 1) real and imaginary parts."""
        n = int(np.prod(shape))
        # 1 - U keeps the log argument in (0, 1].
        u1 = 1.0 - self.uniform(n)
        u2 = self.uniform(n)
        radius = np.sqrt(-2.0 * np.log(u1))
        return (radius * np.exp(2j * np.pi * u2)).reshape(shape)


def spawn_seed(base_seed, *keys):
    """Derive a reproducible 64-bit seed from ``base_seed`` and integer keys."""
    ss = np.random.SeedSequence([int(base_seed), *[int(k) for k in keys]])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)
