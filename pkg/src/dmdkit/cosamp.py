"""Greedy sparse recovery (CoSaMP) and batch recovery of mode matrices.

Solves y ~= Theta @ s for an s with at most K nonzeros, where Theta = C @ Psi
couples a measurement operator with a sparsifying basis.  The support search
runs on entry moduli so complex right-hand sides (DMD modes) work unchanged;
least squares on a candidate support uses the shared pseudoinverse.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import normalize_modes, pseudoinverse
from .measurement import MeasurementOperator

RESIDUAL_WARN = 1e-6


@dataclass(frozen=True)
class SparseRecoveryConfig:
    """Knobs for one CoSaMP run.

    sparsity        target number of nonzeros K
    max_iterations  greedy sweeps before giving up
    residual_tol    stop when ||y - Theta s|| <= residual_tol * ||y||
    """

    sparsity: int
    max_iterations: int = 10
    residual_tol: float = 1e-10

    def __post_init__(self):
        if self.sparsity < 1:
            raise ValueError("sparsity must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.residual_tol < 0:
            raise ValueError("residual_tol must be >= 0")


def _top(values: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest-modulus entries, deterministic order."""
    return np.argsort(-np.abs(values), kind="stable")[:count]


def cosamp(Theta: np.ndarray, y: np.ndarray, config: SparseRecoveryConfig) -> np.ndarray:
    """Recover a K-sparse coefficient vector from y ~= Theta @ s.

    Each sweep scores candidates with the proxy ``Theta* r``, unions the 2K
    best with the current support, solves least squares there, and prunes back
    to the K largest coefficients.  Returns a length-n vector with at most K
    nonzeros, real when both inputs are real.
    """
    Theta = np.asarray(Theta)
    y = np.asarray(y).reshape(-1)
    p, n = Theta.shape
    if y.shape[0] != p:
        raise ValueError(f"y has length {y.shape[0]}, expected {p}")
    k = min(config.sparsity, n)
    if 2 * k > p:
        warnings.warn(
            f"candidate window 2K={2 * k} exceeds measurement count p={p}; "
            "recovery is unreliable",
            stacklevel=2,
        )
    dtype = np.result_type(Theta, y)
    s = np.zeros(n, dtype=dtype)
    ynorm = np.linalg.norm(y)
    if ynorm == 0.0:
        return s
    support = np.empty(0, dtype=np.intp)
    coefficients = np.empty(0, dtype=dtype)
    residual = y.astype(dtype)
    for _ in range(config.max_iterations):
        proxy = Theta.conj().T @ residual
        candidates = np.union1d(support, _top(proxy, 2 * k))
        solved = pseudoinverse(Theta[:, candidates]) @ y
        keep = _top(solved, k)
        support = candidates[keep]
        coefficients = solved[keep]
        residual = y - Theta[:, support] @ coefficients
        if np.linalg.norm(residual) <= config.residual_tol * ynorm:
            break
    s[support] = coefficients
    return s


def recover_full_vectors(
    V: np.ndarray,
    C: MeasurementOperator,
    Psi: np.ndarray,
    config: SparseRecoveryConfig,
    normalize: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Lift measured vectors back to full space, column by column.

    Parameters
    ----------
    V : (p, k) array
        Columns in measurement space (compressed modes, compressed actuation).
    C, Psi : operator and (n, n_coeff) sparsifying basis; Theta = C @ Psi.
    config : SparseRecoveryConfig
    normalize : bool
        Unit-norm phase-fixed output columns (modes).  Leave False for
        quantities whose scale is meaningful, e.g. actuation vectors.

    Returns
    -------
    full : (n, k) array, ``Psi @ s_j`` per column
    residuals : (k,) relative residuals ``||v - Theta s|| / ||v||``

    Columns whose residual stays above RESIDUAL_WARN trigger a warning: the
    target is not sparse enough in Psi for this measurement budget.
    """
    V = np.asarray(V)
    if V.ndim != 2:
        raise ValueError("V must be 2-d")
    Theta = C.apply(Psi)
    n = Psi.shape[0]
    full = np.zeros((n, V.shape[1]), dtype=np.result_type(V, Psi))
    residuals = np.zeros(V.shape[1])
    for j in range(V.shape[1]):
        v = V[:, j]
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        s = cosamp(Theta, v, config)
        residuals[j] = np.linalg.norm(v - Theta @ s) / vnorm
        full[:, j] = Psi @ s
    bad = residuals > RESIDUAL_WARN
    if np.any(bad):
        worst = float(residuals.max())
        warnings.warn(
            f"sparse recovery failed for {int(bad.sum())} of {V.shape[1]} columns "
            f"(worst relative residual {worst:.3g})",
            stacklevel=2,
        )
    if normalize:
        full = normalize_modes(full)
    return full, residuals
