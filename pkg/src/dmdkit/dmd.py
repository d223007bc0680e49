"""Dynamic mode decomposition, with and without a known control input.

Given snapshot pairs X (columns x_0..x_{m-1}) and X' (columns x_1..x_m) the
exact decomposition fits x_{k+1} ~= A x_k through a rank-r SVD of X and the
eigendecomposition of the projected operator.  With a control record Upsilon
the fit becomes x_{k+1} ~= A x_k + B u_k: either B is known and subtracted,
or A and B are identified jointly from the SVD of the stacked data [X; Y].

All models expose the discrete spectrum, its continuous-time counterpart
log(lambda)/dt, unit-norm phase-fixed modes, and amplitudes fit against the
first snapshot.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import (
    TruncatedSvd,
    eig_sorted,
    normalize_modes,
    pseudoinverse,
    rank_by_energy,
    truncated_svd,
)

ZERO_EIG_RTOL = 1e-12


@dataclass(frozen=True)
class SnapshotSet:
    """Paired data matrices for one experiment.

    X, Xp : (n, m) arrays, Xp column k is the successor of X column k
    inputs : (q, m) array of control samples, or None
    dt : sampling interval
    """

    X: np.ndarray
    Xp: np.ndarray
    inputs: np.ndarray | None = None
    dt: float = 1.0

    def __post_init__(self):
        for name in ("X", "Xp"):
            M = np.asarray(getattr(self, name), dtype=float)
            if M.ndim != 2 or M.size == 0:
                raise ValueError(f"{name} must be a nonempty matrix")
            if not np.all(np.isfinite(M)):
                bad = np.argwhere(~np.isfinite(M))[0]
                raise ValueError(f"{name} has a non-finite entry at ({bad[0]}, {bad[1]})")
            object.__setattr__(self, name, M)
        if self.X.shape != self.Xp.shape:
            raise ValueError(f"X and Xp shapes differ: {self.X.shape} vs {self.Xp.shape}")
        if self.inputs is not None:
            U = np.atleast_2d(np.asarray(self.inputs, dtype=float))
            if U.shape[1] != self.m or not np.all(np.isfinite(U)):
                raise ValueError(f"inputs must be (q, {self.m}) and finite, got {U.shape}")
            object.__setattr__(self, "inputs", U)
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    @classmethod
    def from_trajectory(
        cls, T: np.ndarray, dt: float = 1.0, inputs: np.ndarray | None = None
    ) -> "SnapshotSet":
        """Split a trajectory (n, m+1) into leading/trailing snapshot blocks."""
        T = np.asarray(T)
        if T.ndim != 2 or T.shape[1] < 2:
            raise ValueError("trajectory needs at least two snapshots")
        m = T.shape[1] - 1
        if inputs is not None:
            inputs = np.atleast_2d(np.asarray(inputs))[:, :m]
        return cls(T[:, :m], T[:, 1:], inputs, dt)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]

    @property
    def q(self) -> int:
        return 0 if self.inputs is None else self.inputs.shape[0]


@dataclass(frozen=True)
class AugmentedSvd:
    """SVD factors of the stacked data Omega = [X; Upsilon] plus the SVD of X'.

    U1, U2 : state / input blocks of Omega's left factor, shapes (n, rt), (q, rt)
    s, V : Omega's singular values and right factor, (rt,), (m, rt)
    output : rank-r SVD of X' (the projection basis for the identified operator)
    """

    U1: np.ndarray
    U2: np.ndarray
    s: np.ndarray
    V: np.ndarray
    output: TruncatedSvd

    @property
    def r_tilde(self) -> int:
        return len(self.s)


@dataclass(kw_only=True)
class DmdModel:
    """Result of any decomposition in this package.

    eigs/omega are ordered by the shared convention; modes has unit-norm
    phase-fixed columns; amplitudes solve Phi b ~= x_0 in least squares.
    b_hat is the identified (or echoed) actuation matrix when inputs exist.
    svd holds the plain SVD used by exact DMD, aug the stacked-data factors
    used by joint identification; each is None when not applicable.
    """

    algorithm: str
    r: int
    dt: float
    atilde: np.ndarray
    eigs: np.ndarray
    omega: np.ndarray
    modes: np.ndarray
    amplitudes: np.ndarray
    b_hat: np.ndarray | None = None
    svd: TruncatedSvd | None = None
    aug: AugmentedSvd | None = None


def continuous_spectrum(eigs: np.ndarray, dt: float) -> np.ndarray:
    """Map discrete eigenvalues to continuous exponents log(lambda)/dt.

    A zero eigenvalue has no finite exponent; it maps to -inf + 0j as an
    explicit marker.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    eigs = np.asarray(eigs, dtype=complex)
    out = np.full(eigs.shape, complex(-np.inf, 0.0))
    live = eigs != 0
    out[live] = np.log(eigs[live]) / dt
    return out


def _fit_amplitudes(modes: np.ndarray, x0: np.ndarray) -> np.ndarray:
    return pseudoinverse(modes) @ x0.astype(complex)


def _zero_eig_mask(eigs: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(eigs)) if eigs.size else 0.0
    return np.abs(eigs) <= ZERO_EIG_RTOL * max(scale, 1.0)


def exact_dmd(data: SnapshotSet, r: int | None = None) -> DmdModel:
    """Rank-r decomposition of x_{k+1} ~= A x_k.

    The reduced operator is U* X' V inv(S); its eigenvectors lift to exact
    modes X' V inv(S) W, except that a zero eigenvalue falls back to the
    projected mode U w (the exact-mode formula vanishes there).
    """
    dec = truncated_svd(data.X, r)
    if r is None:
        r = rank_by_energy(dec.s)
        dec = TruncatedSvd(dec.U[:, :r], dec.s[:r], dec.V[:, :r])
    XpV = data.Xp @ (dec.V / dec.s)
    atilde = dec.U.conj().T @ XpV
    eigs, W = eig_sorted(atilde)
    modes = XpV @ W
    zero = _zero_eig_mask(eigs)
    if np.any(zero):
        modes[:, zero] = (dec.U @ W)[:, zero]
    modes = normalize_modes(modes)
    return DmdModel(
        algorithm="dmd",
        r=dec.rank,
        dt=data.dt,
        atilde=atilde,
        eigs=eigs,
        omega=continuous_spectrum(eigs, data.dt),
        modes=modes,
        amplitudes=_fit_amplitudes(modes, data.X[:, 0]),
        svd=dec,
    )


def dmdc_known_b(data: SnapshotSet, B: np.ndarray, r: int | None = None) -> DmdModel:
    """Decomposition with a known actuation matrix.

    Subtracts the forced part, X' - B Upsilon, and runs exact DMD on the
    remainder; B is echoed on the model.
    """
    if data.inputs is None:
        raise ValueError("snapshot set has no control inputs")
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if B.shape[0] == 1 and data.n > 1:
        B = B.T
    if B.shape != (data.n, data.q):
        raise ValueError(f"B must be ({data.n}, {data.q}), got {B.shape}")
    corrected = SnapshotSet(data.X, data.Xp - B @ data.inputs, None, data.dt)
    model = exact_dmd(corrected, r)
    model.algorithm = "dmdc"
    model.b_hat = B
    return model


def augmented_factors(data: SnapshotSet, r: int | None, r_tilde: int | None) -> AugmentedSvd:
    """SVD factors for joint identification from [X; Upsilon] and X'."""
    if data.inputs is None:
        raise ValueError("snapshot set has no control inputs")
    omega = np.vstack([data.X, data.inputs])
    stacked = truncated_svd(omega, r_tilde)
    if r_tilde is None:
        r_tilde = rank_by_energy(stacked.s)
        stacked = TruncatedSvd(stacked.U[:, :r_tilde], stacked.s[:r_tilde], stacked.V[:, :r_tilde])
    output = truncated_svd(data.Xp, r)
    if r is None:
        r = rank_by_energy(output.s)
        output = TruncatedSvd(output.U[:, :r], output.s[:r], output.V[:, :r])
    if output.rank > stacked.rank:
        warnings.warn(
            f"output rank {output.rank} exceeds stacked-data rank {stacked.rank}; "
            "the identified operator is likely rank-starved",
            stacklevel=2,
        )
    n = data.n
    return AugmentedSvd(stacked.U[:n], stacked.U[n:], stacked.s, stacked.V, output)


def dmdc_unknown_b(
    data: SnapshotSet, r: int | None = None, r_tilde: int | None = None
) -> DmdModel:
    """Joint identification of the dynamics and the actuation matrix.

    With G = X' V inv(S) from the stacked SVD, the reduced operator is
    Uhat* G U1* Uhat and the actuation estimate is B_hat = G U2*.  Modes lift
    through G U1* Uhat; a zero eigenvalue falls back to the projection
    U1 U1* Uhat w.
    """
    aug = augmented_factors(data, r, r_tilde)
    return _dmdc_from_factors(data.Xp, aug, data.dt, data.X[:, 0])


def _dmdc_from_factors(
    Xp: np.ndarray, aug: AugmentedSvd, dt: float, x0: np.ndarray
) -> DmdModel:
    """Shared backend for joint identification: full-state or measurement space."""
    G = Xp @ (aug.V / aug.s)
    Uhat = aug.output.U
    GU1hat = G @ (aug.U1.conj().T @ Uhat)
    atilde = Uhat.conj().T @ GU1hat
    b_hat = G @ aug.U2.conj().T
    eigs, W = eig_sorted(atilde)
    modes = GU1hat @ W
    zero = _zero_eig_mask(eigs)
    if np.any(zero):
        fallback = aug.U1 @ (aug.U1.conj().T @ (Uhat @ W))
        modes[:, zero] = fallback[:, zero]
    modes = normalize_modes(modes)
    return DmdModel(
        algorithm="dmdc",
        r=aug.output.rank,
        dt=dt,
        atilde=atilde,
        eigs=eigs,
        omega=continuous_spectrum(eigs, dt),
        modes=modes,
        amplitudes=_fit_amplitudes(modes, x0),
        b_hat=b_hat,
        aug=aug,
    )


def predict(
    model: DmdModel,
    x0: np.ndarray,
    steps: int,
    inputs: np.ndarray | None = None,
) -> np.ndarray:
    """Roll the model forward ``steps`` transitions from ``x0``.

    The state is projected to modal coordinates z = pinv(Phi) x, advanced by
    z_{k+1} = diag(eigs) z_k (+ pinv(Phi) B u_k when inputs are given), and
    lifted back; the real part is returned as an (n, steps+1) trajectory.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != model.modes.shape[0]:
        raise ValueError(f"x0 has length {x0.shape[0]}, expected {model.modes.shape[0]}")
    phi_pinv = pseudoinverse(model.modes)
    if inputs is not None:
        if model.b_hat is None:
            raise ValueError("model has no actuation estimate; cannot apply inputs")
        U = np.atleast_2d(np.asarray(inputs, dtype=float))
        if U.shape[1] < steps:
            raise ValueError(f"need {steps} input samples, got {U.shape[1]}")
        b_reduced = phi_pinv @ model.b_hat
    z = phi_pinv @ x0.astype(complex)
    out = np.empty((x0.shape[0], steps + 1))
    out[:, 0] = (model.modes @ z).real
    for k in range(steps):
        z = model.eigs * z
        if inputs is not None:
            z = z + b_reduced @ U[:, k]
        out[:, k + 1] = (model.modes @ z).real
    return out
