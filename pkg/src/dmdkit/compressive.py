"""Decompositions from compressed measurements y = C x.

The reduced eigenproblem is solved entirely in measurement space (p-dim), so
the spectrum never depends on whether full-state data is at hand.  Modes are
brought back to state space by one of two routes:

``projection``          full-state snapshots are available and the compressed
                        right factors lift them directly;
``compressed_sensing``  only measurements exist, so each measured mode is
                        recovered through the sparsifying basis with CoSaMP.

With a control record the same split applies to the pair (A, B).  Branching
is by what the caller supplies: ``full_state`` picks the lift, ``b_known``
subtracts the forced response up front, and their absence selects joint
identification and sparse recovery of both the modes and the actuation.
"""

from dataclasses import dataclass

import numpy as np

from .cosamp import SparseRecoveryConfig, recover_full_vectors
from .dmd import (
    DmdModel,
    SnapshotSet,
    _dmdc_from_factors,
    _fit_amplitudes,
    _zero_eig_mask,
    augmented_factors,
    continuous_spectrum,
    exact_dmd,
)
from .linalg import TruncatedSvd, eig_sorted, normalize_modes, rank_by_energy, truncated_svd
from .measurement import MeasurementOperator
from .util import ConsistencyError

PATH_PROJECTION = "projection"
PATH_SPARSE = "compressed_sensing"

CONSISTENCY_TOL = 1e-10
_CONSISTENCY_COLUMNS = 8


@dataclass
class CompressiveInputs:
    """Everything a compressed decomposition may consume.

    Y, Yp : (p, m) measured snapshot pairs
    dt : sampling interval
    inputs : (q, m) control record, or None for autonomous data
    C : the measurement operator; may be None only on projection branches
        that never touch it (full state known, actuation unknown)
    full_state : (X, Xp) tuple when the underlying snapshots are available
    b_known : actuation matrix in state space, if known
    r, r_tilde : truncation ranks (None = 99% singular-value energy)
    psi : sparsifying basis for recovery (None = DCT of size C.n)
    recovery : CoSaMP settings for mode recovery (required on sparse paths)
    recovery_b : CoSaMP settings for actuation recovery (defaults to recovery)
    """

    Y: np.ndarray
    Yp: np.ndarray
    dt: float = 1.0
    inputs: np.ndarray | None = None
    C: MeasurementOperator | None = None
    full_state: tuple[np.ndarray, np.ndarray] | None = None
    b_known: np.ndarray | None = None
    r: int | None = None
    r_tilde: int | None = None
    psi: np.ndarray | None = None
    recovery: SparseRecoveryConfig | None = None
    recovery_b: SparseRecoveryConfig | None = None

    def __post_init__(self):
        self.Y = np.asarray(self.Y, dtype=float)
        self.Yp = np.asarray(self.Yp, dtype=float)
        if self.Y.ndim != 2 or self.Y.shape != self.Yp.shape:
            raise ValueError(f"Y and Yp must be matching matrices, got {self.Y.shape} vs {self.Yp.shape}")
        if self.inputs is not None:
            self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=float))
            if self.inputs.shape[1] != self.m:
                raise ValueError(f"inputs must have {self.m} columns, got {self.inputs.shape[1]}")
        if self.full_state is not None:
            X, Xp = (np.asarray(M, dtype=float) for M in self.full_state)
            if X.shape != Xp.shape or X.shape[1] != self.m:
                raise ValueError("full_state matrices must match Y's column count")
            self.full_state = (X, Xp)
        if self.C is not None:
            if self.C.p != self.p:
                raise ValueError(f"operator produces {self.C.p} measurements, Y has {self.p} rows")
            if self.full_state is not None:
                self._check_consistency()
        if self.b_known is not None:
            if self.inputs is None:
                raise ValueError("b_known given but there is no control record")
            n = self.full_state[0].shape[0] if self.full_state is not None else (
                self.C.n if self.C is not None else None
            )
            if n is None:
                raise ValueError("b_known needs full_state or C to fix the state dimension")
            B = np.atleast_2d(np.asarray(self.b_known, dtype=float))
            if B.shape[0] == 1 and n > 1:
                B = B.T
            if B.shape != (n, self.q):
                raise ValueError(f"b_known must be ({n}, {self.q}), got {B.shape}")
            self.b_known = B
        if self.recovery_b is None:
            self.recovery_b = self.recovery

    def _check_consistency(self):
        """Spot-check Y = C X on a few columns; full agreement is implied for
        any honest pipeline and checking every column would double the large
        compression matmul."""
        X = self.full_state[0]
        idx = np.unique(np.linspace(0, self.m - 1, min(self.m, _CONSISTENCY_COLUMNS)).astype(int))
        sample = self.C.apply(X[:, idx])
        scale = max(np.linalg.norm(self.Y[:, idx]), 1e-300)
        residual = np.linalg.norm(sample - self.Y[:, idx]) / scale
        if residual > CONSISTENCY_TOL:
            raise ConsistencyError(
                f"measurements disagree with C @ X: relative residual {residual:.3e} "
                f"exceeds {CONSISTENCY_TOL:g}"
            )

    @property
    def p(self) -> int:
        return self.Y.shape[0]

    @property
    def m(self) -> int:
        return self.Y.shape[1]

    @property
    def q(self) -> int:
        return 0 if self.inputs is None else self.inputs.shape[0]

    def recovery_basis(self) -> np.ndarray:
        if self.psi is None:
            if self.C is None:
                raise ValueError("no sparsifying basis: give psi or a measurement operator")
            from .linalg import dct_basis

            self.psi = dct_basis(self.C.n)
        return self.psi

    def require_recovery(self) -> SparseRecoveryConfig:
        if self.recovery is None:
            raise ValueError("sparse recovery config required when full_state is absent")
        if self.C is None:
            raise ValueError("measurement operator required for sparse recovery")
        return self.recovery


@dataclass(kw_only=True)
class CompressiveModel(DmdModel):
    """A DmdModel whose reduced problem was solved in measurement space.

    ``eigs`` is the compressed spectrum itself (the eigenproblem is the same
    one whichever recovery path runs).  ``modes_compressed``/``b_compressed``
    live in measurement space; ``modes``/``b_hat`` are their state-space
    versions via the path named in ``path``.  Recovery residuals are relative,
    per column, and only set on the sparse path.
    """

    path: str
    modes_compressed: np.ndarray | None = None
    b_compressed: np.ndarray | None = None
    mode_residuals: np.ndarray | None = None
    b_residuals: np.ndarray | None = None

    @property
    def eigs_compressed(self) -> np.ndarray:
        return self.eigs


def _compressed_pod(ci: CompressiveInputs, Yp_adj: np.ndarray):
    """Rank-r SVD of Y and the reduced operator built from adjusted Yp."""
    dec = truncated_svd(ci.Y, ci.r)
    if ci.r is None:
        r = rank_by_energy(dec.s)
        dec = TruncatedSvd(dec.U[:, :r], dec.s[:r], dec.V[:, :r])
    right = dec.V / dec.s
    atilde = dec.U.conj().T @ (Yp_adj @ right)
    return dec, right, atilde


def _cdmd_core(
    ci: CompressiveInputs,
    Yp_adj: np.ndarray,
    Xp_adj: np.ndarray | None,
    algorithm: str,
) -> CompressiveModel:
    """Shared worker for the no-control (or control-corrected) decompositions."""
    dec, right, atilde = _compressed_pod(ci, Yp_adj)
    eigs, W = eig_sorted(atilde)
    modes_y = (Yp_adj @ right) @ W
    zero = _zero_eig_mask(eigs)
    if np.any(zero):
        modes_y[:, zero] = (dec.U @ W)[:, zero]
    mode_residuals = None
    if ci.full_state is not None:
        X, _ = ci.full_state
        modes = (Xp_adj @ right) @ W
        if np.any(zero):
            state_dec = truncated_svd(X, dec.rank)
            modes[:, zero] = (state_dec.U.astype(complex) @ W)[:, zero]
        modes = normalize_modes(modes)
        amplitudes = _fit_amplitudes(modes, X[:, 0])
        path = PATH_PROJECTION
    else:
        config = ci.require_recovery()
        modes, mode_residuals = recover_full_vectors(
            normalize_modes(modes_y), ci.C, ci.recovery_basis(), config
        )
        amplitudes = _fit_amplitudes(ci.C.apply(modes), ci.Y[:, 0])
        path = PATH_SPARSE
    return CompressiveModel(
        algorithm=algorithm,
        r=dec.rank,
        dt=ci.dt,
        atilde=atilde,
        eigs=eigs,
        omega=continuous_spectrum(eigs, ci.dt),
        modes=modes,
        amplitudes=amplitudes,
        svd=dec,
        path=path,
        modes_compressed=modes_y,
        mode_residuals=mode_residuals,
    )


def cdmd(ci: CompressiveInputs) -> CompressiveModel:
    """Compressed decomposition of autonomous data (no control record).

    The spectrum comes from the measurement-space eigenproblem; modes lift via
    the projection path when ``full_state`` is present, else by sparse
    recovery through ``psi``.
    """
    if ci.inputs is not None:
        raise ValueError("data has a control record; use cdmdc")
    if ci.b_known is not None:
        raise ValueError("b_known is meaningless without a control record")
    Xp = ci.full_state[1] if ci.full_state is not None else None
    return _cdmd_core(ci, ci.Yp, Xp, "cdmd")


def cdmdc(ci: CompressiveInputs) -> CompressiveModel:
    """Compressed decomposition with control.

    Dispatch::

        b_known, full_state      subtract forcing, project modes
        b_known, no full_state   subtract forcing, sparse-recover modes
        unknown B, full_state    joint identification, project modes and B
        unknown B, no state      joint identification, sparse-recover both

    The identified spectrum is identical (bitwise) for the two branches of
    each pair: the measurement-space eigenproblem does not see ``full_state``.
    """
    if ci.inputs is None:
        raise ValueError("no control record; use cdmd")
    if ci.b_known is not None:
        return _cdmdc_known_b(ci)
    return _cdmdc_unknown_b(ci)


def _cdmdc_known_b(ci: CompressiveInputs) -> CompressiveModel:
    if ci.C is None:
        raise ValueError("C is required to project a known actuation matrix")
    CB = ci.C.apply(ci.b_known)
    Yp_adj = ci.Yp - CB @ ci.inputs
    if ci.full_state is not None:
        X, Xp = ci.full_state
        Xp_adj = Xp - ci.b_known @ ci.inputs
    else:
        Xp_adj = None
    model = _cdmd_core(ci, Yp_adj, Xp_adj, "cdmdc")
    model.b_hat = ci.b_known
    return model


def _cdmdc_unknown_b(ci: CompressiveInputs) -> CompressiveModel:
    measured = SnapshotSet(ci.Y, ci.Yp, ci.inputs, ci.dt)
    aug = augmented_factors(measured, ci.r, ci.r_tilde)
    ymodel = _dmdc_from_factors(ci.Yp, aug, ci.dt, ci.Y[:, 0])
    if ci.full_state is not None:
        model = _lift_joint(ci, aug, ymodel)
    else:
        config = ci.require_recovery()
        psi = ci.recovery_basis()
        modes, mode_residuals = recover_full_vectors(ymodel.modes, ci.C, psi, config)
        b_hat, b_residuals = recover_full_vectors(
            ymodel.b_hat, ci.C, psi, ci.recovery_b, normalize=False
        )
        model = CompressiveModel(
            algorithm="cdmdc",
            r=ymodel.r,
            dt=ci.dt,
            atilde=ymodel.atilde,
            eigs=ymodel.eigs,
            omega=ymodel.omega,
            modes=modes,
            amplitudes=_fit_amplitudes(ci.C.apply(modes), ci.Y[:, 0]),
            b_hat=b_hat,
            aug=aug,
            path=PATH_SPARSE,
            modes_compressed=ymodel.modes,
            b_compressed=ymodel.b_hat,
            mode_residuals=mode_residuals,
            b_residuals=b_residuals,
        )
    return model


def _lift_joint(ci: CompressiveInputs, aug, ymodel) -> CompressiveModel:
    """Joint identification with full-state data: the reduced problem stays in
    measurement space, only the mode and actuation lifts use X'."""
    X, Xp = ci.full_state
    eigs, W = eig_sorted(ymodel.atilde)
    L = Xp @ (aug.V / aug.s)
    Uhat = aug.output.U
    modes = L @ ((aug.U1.conj().T @ Uhat) @ W)
    zero = _zero_eig_mask(eigs)
    if np.any(zero):
        stacked = truncated_svd(np.vstack([X, ci.inputs]), aug.r_tilde)
        U1_full = stacked.U[: X.shape[0]]
        fallback = U1_full @ (aug.U1.conj().T @ (Uhat @ W))
        modes[:, zero] = fallback[:, zero]
    modes = normalize_modes(modes)
    b_hat = L @ aug.U2.conj().T
    return CompressiveModel(
        algorithm="cdmdc",
        r=ymodel.r,
        dt=ci.dt,
        atilde=ymodel.atilde,
        eigs=ymodel.eigs,
        omega=ymodel.omega,
        modes=modes,
        amplitudes=_fit_amplitudes(modes, X[:, 0]),
        b_hat=b_hat,
        aug=aug,
        path=PATH_PROJECTION,
        modes_compressed=ymodel.modes,
        b_compressed=ymodel.b_hat,
    )
