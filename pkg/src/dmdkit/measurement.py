"""Random measurement operators C : R^n -> R^p and their application.

Four kinds, always named, never numbered:

``uniform``       entries U(-1, 1) scaled by n^{-1/2}
``gaussian``      entries N(0, 1/p)
``bernoulli``     entries +/- p^{-1/2} with equal probability
``single_pixel``  p distinct rows of the identity (point samples)

A spec (kind, p, n, seed) determines the operator bitwise: building it twice,
on any platform, gives the same matrix.  ``compress_with_spec`` applies the
same operator without ever materializing it, generating rows in blocks from
the identical PCG64 stream; use it when p*n is too large to hold.
"""

from dataclasses import dataclass

import numpy as np

from .util import rng_from

KINDS = ("uniform", "gaussian", "bernoulli", "single_pixel")

LINEARITY_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementSpec:
    kind: str
    p: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown measurement kind {self.kind!r}, expected one of {KINDS}")
        if not 1 <= self.p <= self.n:
            raise ValueError(f"need 1 <= p <= n, got p={self.p}, n={self.n}")


@dataclass(frozen=True)
class MeasurementOperator:
    """A realized operator: dense matrix ``C`` plus the spec that made it.

    ``spec`` is None for operators loaded from a file rather than drawn.
    For ``single_pixel`` the selected row indices are kept so application is
    a row gather rather than a matmul.
    """

    C: np.ndarray
    spec: MeasurementSpec | None = None
    rows: np.ndarray | None = None

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def n(self) -> int:
        return self.C.shape[1]

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Y = C @ X (row gather for single-pixel operators)."""
        X = np.asarray(X)
        if X.shape[0] != self.n:
            raise ValueError(f"operator expects {self.n} rows, got {X.shape[0]}")
        if self.rows is not None:
            return X[self.rows].copy()
        return self.C @ X


def _draw_rows(kind: str, rng: np.random.Generator, count: int, n: int, p: int) -> np.ndarray:
    if kind == "uniform":
        return rng.uniform(-1.0, 1.0, size=(count, n)) / np.sqrt(n)
    if kind == "gaussian":
        return rng.standard_normal((count, n)) / np.sqrt(p)
    if kind == "bernoulli":
        return (2.0 * rng.integers(0, 2, size=(count, n)) - 1.0) / np.sqrt(p)
    raise ValueError(kind)


def build_measurement(spec: MeasurementSpec) -> MeasurementOperator:
    """Realize the operator named by ``spec``.

    ``single_pixel`` draws p distinct indices without replacement; with p = n
    the result is a row permutation of the identity (lossless).
    """
    rng = rng_from(spec.seed)
    if spec.kind == "single_pixel":
        rows = np.sort(rng.choice(spec.n, size=spec.p, replace=False))
        C = np.zeros((spec.p, spec.n))
        C[np.arange(spec.p), rows] = 1.0
        return MeasurementOperator(C, spec, rows=rows)
    C = _draw_rows(spec.kind, rng, spec.p, spec.n, spec.p)
    return MeasurementOperator(C, spec)


def operator_from_matrix(C: np.ndarray) -> MeasurementOperator:
    """Wrap an explicit measurement matrix (e.g. loaded from a file)."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape[0] > C.shape[1]:
        raise ValueError(f"measurement matrix must be wide, got {C.shape}")
    return MeasurementOperator(C)


def compress(op: MeasurementOperator, X: np.ndarray) -> np.ndarray:
    """Apply a realized operator: Y = C @ X."""
    return op.apply(X)


def compress_with_spec(spec: MeasurementSpec, X: np.ndarray, block_rows: int = 512) -> np.ndarray:
    """Y = C @ X without materializing C.

    Rows of C are generated ``block_rows`` at a time from the same seeded
    stream as :func:`build_measurement`, multiplied into X, and discarded.
    Row i of the product matches the materialized version up to the usual
    reassociation noise of the BLAS call (well inside LINEARITY_TOL).
    """
    X = np.asarray(X)
    if X.shape[0] != spec.n:
        raise ValueError(f"spec expects {spec.n} rows, got {X.shape[0]}")
    rng = rng_from(spec.seed)
    if spec.kind == "single_pixel":
        rows = np.sort(rng.choice(spec.n, size=spec.p, replace=False))
        return X[rows].copy()
    Y = np.empty((spec.p, X.shape[1]), dtype=np.result_type(X, np.float64))
    for start in range(0, spec.p, block_rows):
        stop = min(start + block_rows, spec.p)
        Y[start:stop] = _draw_rows(spec.kind, rng, stop - start, spec.n, spec.p) @ X
    return Y
