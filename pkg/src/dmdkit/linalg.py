"""Dense linear-algebra kernels shared by every decomposition in the package.

Everything here wraps LAPACK (through numpy) and then pins down the choices
LAPACK leaves open: where to cut a truncated SVD, how to order eigenvalues,
and how to fix eigenvector phase.  Downstream results are reproducible to the
bit only because these conventions live in one place.

Conventions
-----------
* Truncation: singular values below ``RANK_RTOL`` times the largest are
  treated as zero everywhere (SVD rank, pseudoinverse, controllability rank).
* Eigenvalue order: descending modulus, ties broken by ascending ``|arg|``,
  then by descending imaginary part so the positive-frequency member of a
  conjugate pair comes first.  For sampled data this equals sorting by the
  continuous-time exponent ``log(lambda)/dt`` (descending real part, ties by
  ascending ``|imag|``) for any positive dt.
* Eigenvector phase: each column has unit norm and its largest-modulus entry
  rotated to the positive real axis.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .util import NumericalError

RANK_RTOL = 1e-12


def _check_matrix(M: np.ndarray, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {M.shape}")
    if M.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(M)):
        bad = np.argwhere(~np.isfinite(M))[0]
        raise ValueError(f"{name} has a non-finite entry at ({bad[0]}, {bad[1]})")
    return M


@dataclass(frozen=True)
class TruncatedSvd:
    """Rank-r factors M ~= U @ diag(s) @ V.conj().T."""

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.s)


def truncated_svd(M: np.ndarray, r: int | None = None) -> TruncatedSvd:
    """Rank-``r`` SVD of ``M`` with the shared truncation rule.

    Parameters
    ----------
    M : (n, m) array
    r : int or None
        Requested rank.  ``None`` keeps every singular value above the
        noise-floor cut ``RANK_RTOL * s[0]``.  If the numerical rank is below
        the request, the factors are truncated to it and a warning is issued.

    Returns
    -------
    TruncatedSvd with ``U (n, k)``, ``s (k,)``, ``V (m, k)`` and ``k <= r``.
    """
    M = _check_matrix(M)
    if r is not None:
        r = int(r)
        if r < 1 or r > min(M.shape):
            raise NumericalError(
                f"rank {r} out of range for shape {M.shape[0]}x{M.shape[1]}"
            )
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0.0:
        raise NumericalError("matrix is identically zero, rank 0")
    effective = int(np.count_nonzero(s > RANK_RTOL * s[0]))
    if r is None:
        r = effective
    elif effective < r:
        warnings.warn(
            f"requested rank {r} exceeds numerical rank {effective}; truncating",
            stacklevel=2,
        )
        r = effective
    return TruncatedSvd(U[:, :r], s[:r], Vh[:r].conj().T)


def rank_by_energy(s: np.ndarray, energy: float = 0.99) -> int:
    """Smallest rank whose squared singular values capture ``energy`` of the total."""
    s = np.asarray(s, dtype=float)
    if s.size == 0 or not 0.0 < energy <= 1.0:
        raise ValueError("need nonempty spectrum and 0 < energy <= 1")
    cum = np.cumsum(s**2)
    return int(np.searchsorted(cum, energy * cum[-1] - 1e-15 * cum[-1]) + 1)


def numerical_rank(M: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Count singular values above ``rtol`` times the largest.

    The right truncation for exactly low-rank data, where the energy rule
    would drop live directions that happen to carry little variance.
    """
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def eig_sorted(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a square matrix under the package conventions.

    Returns
    -------
    eigs : (k,) complex, ordered as in the module docstring
    W : (k, k) complex, unit-norm columns with phase fixed

    The pair satisfies ``A @ W ~= W @ diag(eigs)`` to LAPACK accuracy; the
    ordering and phase make repeated runs bit-identical.
    """
    A = _check_matrix(A, "A")
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got {A.shape}")
    eigs, W = np.linalg.eig(A)
    mags = np.abs(eigs)
    order = np.lexsort((-eigs.imag, np.abs(np.angle(eigs)), -mags))
    eigs = eigs[order]
    W = normalize_modes(W[:, order])
    return eigs, W


def normalize_modes(Phi: np.ndarray) -> np.ndarray:
    """Unit-norm columns with the largest-modulus entry rotated real positive.

    Zero columns are left untouched.  The result is complex.
    """
    Phi = np.array(Phi, dtype=complex)
    for j in range(Phi.shape[1]):
        col = Phi[:, j]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            continue
        col = col / norm
        lead = col[np.argmax(np.abs(col))]
        Phi[:, j] = col * (np.conj(lead) / np.abs(lead))
    return Phi


def pseudoinverse(M: np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the shared truncation rule."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {M.shape}")
    if M.size and not np.all(np.isfinite(M)):
        bad = np.argwhere(~np.isfinite(M))[0]
        raise ValueError(f"matrix has a non-finite entry at ({bad[0]}, {bad[1]})")
    return np.linalg.pinv(M, rcond=RANK_RTOL)


def dct_column(n: int, k: int) -> np.ndarray:
    """Column ``k`` of the orthonormal DCT-II synthesis basis of size ``n``.

    Closed form, O(n): usable at large n where the full basis would not fit.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= k < n:
        raise ValueError(f"wavenumber {k} out of range for n={n}")
    i = np.arange(n)
    if k == 0:
        return np.full(n, 1.0 / np.sqrt(n))
    return np.sqrt(2.0 / n) * np.cos(np.pi * (2 * i + 1) * k / (2 * n))


def dct_basis(n: int) -> np.ndarray:
    """Orthonormal DCT-II synthesis basis Psi, shape (n, n).

    ``Psi @ s`` maps DCT coefficients to a signal; ``Psi.T @ x`` analyzes.
    Column k is the wavenumber-k cosine mode.  Materializes an n x n array,
    so keep n modest (a few thousand); use :func:`dct_column` beyond that.
    """
    if n < 1:
        raise ValueError("n must be positive")
    i = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    Psi = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * i + 1) * k / (2 * n))
    Psi[:, 0] = 1.0 / np.sqrt(n)
    return Psi
