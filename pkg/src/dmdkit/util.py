"""Shared plumbing: error types and the seeding discipline.

All randomness in the package flows through numpy's PCG64 generator, which is
a named, portable 64-bit PRNG: the same seed produces the same stream on every
platform and in every run.  Ensembles never reuse a master seed directly.
Instead each realization derives a child seed with ``derive_seed(master, *key)``
so that streams for different realizations (or different purposes inside one
realization) are independent and reproducible.
"""

import numpy as np


class NumericalError(ValueError):
    """Data-dependent failure: degenerate rank, infeasible truncation,
    failed sparse recovery, inconsistent measurements."""


class ConsistencyError(NumericalError):
    """Provided matrices contradict each other (e.g. Y does not equal C @ X)."""


def derive_seed(master: int, *key: int) -> int:
    """Derive a child seed from a master seed and an integer key path.

    The rule is ``SeedSequence(master, spawn_key=key)`` reduced to its first
    uint64 word.  It is pure (no generator state involved), so
    ``derive_seed(0, 2, 5)`` names the same stream forever.
    """
    ss = np.random.SeedSequence(master, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def rng_from(seed: int) -> np.random.Generator:
    """PCG64 generator for ``seed``.  Single chokepoint so the generator
    choice is uniform across the package."""
    return np.random.default_rng(int(seed))
