"""Synthetic test systems and snapshot file I/O.

The workhorse is a low-dimensional linear plant lifted into a high-dimensional
state by a few cosine modes: the reduced state obeys
``z_{k+1} = Atilde z_k + Btilde u_k`` and the observed state is ``x = P z``,
where each column of P is sparse in the DCT basis.  That gives data whose
dynamics, modes, actuation, and sparsity structure are all known exactly, so
every estimator in the package can be scored against ground truth.

Snapshot matrices are stored either as a small binary format (see
``save_matrix``) or as plain CSV grids; a JSON manifest ties the pieces of a
snapshot set together.
"""

import json
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dmd import SnapshotSet
from .linalg import dct_column, eig_sorted, normalize_modes, pseudoinverse
from .util import rng_from

DEFAULT_ATILDE = ((0.9, 0.2), (-0.1, 0.9))
DEFAULT_BTILDE = ((0.1,), (0.01,))
DEFAULT_WAVENUMBERS = (25, 50, 75, 100)
# Two magnitude rows chosen mutually orthogonal so the lifted modes come out
# orthonormal after column normalization.
DEFAULT_MAGNITUDES = ((1.0, 0.6, 0.3, 0.1), (0.6, -1.0, 0.2, -0.6))

MAGIC = b"CDMC"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHBBQQ")
_DTYPES = {0: np.dtype("<f8"), 1: np.dtype("<c16")}


@dataclass(frozen=True)
class LowRankPlant:
    """k-dimensional linear dynamics lifted to n dimensions by P (n, k)."""

    atilde: np.ndarray
    btilde: np.ndarray
    P: np.ndarray
    dt: float = 1.0

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def k(self) -> int:
        return self.P.shape[1]

    @property
    def q(self) -> int:
        return self.btilde.shape[1]


@dataclass(frozen=True)
class SyntheticRun:
    """One simulated experiment plus its ground truth."""

    snapshots: SnapshotSet
    reduced: np.ndarray
    eigs_true: np.ndarray
    modes_true: np.ndarray
    b_true: np.ndarray
    plant: LowRankPlant
    seed: int | None = None


def build_lifting_modes(
    n: int,
    wavenumbers=DEFAULT_WAVENUMBERS,
    magnitudes=DEFAULT_MAGNITUDES,
    seed: int | None = None,
    n_modes: int | None = None,
) -> np.ndarray:
    """Unit-norm columns, each a fixed-sparsity combination of DCT modes.

    All columns share the same wavenumber support (one coefficient row per
    column).  Pass ``seed`` with ``n_modes`` to draw random distinct
    wavenumbers and magnitudes instead of the shipped defaults.

    Returns P of shape (n, n_modes); never materializes an n x n basis, so n
    in the tens of thousands is fine.
    """
    if seed is not None:
        if n_modes is None:
            raise ValueError("random lifting modes need n_modes")
        rng = rng_from(seed)
        sparsity = len(wavenumbers)
        wavenumbers = np.sort(rng.choice(np.arange(1, n), size=sparsity, replace=False))
        magnitudes = rng.uniform(-1.0, 1.0, size=(n_modes, sparsity))
    wavenumbers = [int(k) for k in wavenumbers]
    if len(set(wavenumbers)) != len(wavenumbers):
        raise ValueError(f"duplicate wavenumbers in {wavenumbers}")
    magnitudes = np.atleast_2d(np.asarray(magnitudes, dtype=float))
    if magnitudes.shape[1] != len(wavenumbers):
        raise ValueError("need one magnitude per wavenumber in every row")
    columns = np.column_stack([dct_column(n, k) for k in wavenumbers])
    P = columns @ magnitudes.T
    norms = np.linalg.norm(P, axis=0)
    if np.any(norms == 0):
        raise ValueError("a lifting mode came out identically zero")
    return P / norms


def default_plant(n: int = 1024, dt: float = 0.1) -> LowRankPlant:
    """The standard two-mode spiral plant used throughout tests and demos.

    Eigenvalues 0.9 +/- i sqrt(0.02) (stable, |lambda| = sqrt(0.83)), one
    control channel, lifted by two orthonormal DCT-sparse modes.
    """
    return LowRankPlant(
        np.array(DEFAULT_ATILDE),
        np.array(DEFAULT_BTILDE),
        build_lifting_modes(n),
        dt,
    )


def gaussian_forcing(q: int, m: int, seed: int, scale: float = 1.0) -> np.ndarray:
    """Unit-variance (times scale) white forcing record of shape (q, m)."""
    return scale * rng_from(seed).standard_normal((q, m))


def simulate(
    plant: LowRankPlant,
    x0_reduced: np.ndarray,
    forcing: np.ndarray,
    m: int | None = None,
    b_full: np.ndarray | None = None,
) -> SyntheticRun:
    """Drive the plant for ``m`` transitions and lift the trajectory.

    ``m`` defaults to the forcing length; the returned snapshot matrices X
    and X' each have m columns (the trajectory has m + 1 snapshots).

    ``b_full`` replaces the lifted actuation P @ Btilde with an arbitrary
    state-space matrix; the simulation then runs in full state space because
    the dynamics no longer close in the reduced coordinates.
    """
    forcing = np.atleast_2d(np.asarray(forcing, dtype=float))
    if m is None:
        m = forcing.shape[1]
    if m < 2:
        raise ValueError("need at least two transitions")
    if forcing.shape[1] < m:
        raise ValueError(f"forcing has {forcing.shape[1]} samples, need {m}")
    if forcing.shape[0] != plant.q:
        raise ValueError(f"forcing has {forcing.shape[0]} channels, plant has {plant.q}")
    x0_reduced = np.asarray(x0_reduced, dtype=float).reshape(-1)
    if x0_reduced.shape[0] != plant.k:
        raise ValueError(f"x0 must have {plant.k} entries")

    eigs_true, W = eig_sorted(plant.atilde)
    modes_true = normalize_modes(plant.P @ W)

    if b_full is None:
        reduced = np.empty((plant.k, m + 1))
        reduced[:, 0] = x0_reduced
        for k in range(m):
            reduced[:, k + 1] = plant.atilde @ reduced[:, k] + plant.btilde @ forcing[:, k]
        trajectory = plant.P @ reduced
        b_true = plant.P @ plant.btilde
    else:
        b_true = np.atleast_2d(np.asarray(b_full, dtype=float))
        if b_true.shape[0] == 1 and plant.n > 1:
            b_true = b_true.T
        if b_true.shape != (plant.n, plant.q):
            raise ValueError(f"b_full must be ({plant.n}, {plant.q})")
        P_pinv = pseudoinverse(plant.P)
        trajectory = np.empty((plant.n, m + 1))
        trajectory[:, 0] = plant.P @ x0_reduced
        for k in range(m):
            # x+ = P Atilde P^+ x + B u, applied factored so n stays cheap
            trajectory[:, k + 1] = (
                plant.P @ (plant.atilde @ (P_pinv @ trajectory[:, k]))
                + b_true @ forcing[:, k]
            )
        reduced = P_pinv @ trajectory

    snaps = SnapshotSet.from_trajectory(trajectory, plant.dt, forcing[:, :m])
    return SyntheticRun(snaps, reduced, eigs_true, modes_true, b_true, plant)


def toy_run(
    n: int = 1024,
    m: int = 301,
    dt: float = 0.1,
    seed: int = 0,
    plant: LowRankPlant | None = None,
    x0_reduced=(0.25, 0.25),
    forcing_scale: float = 1.0,
    b_full: np.ndarray | None = None,
) -> SyntheticRun:
    """Default spiral-plant experiment: Gaussian forcing, known ground truth."""
    if plant is None:
        plant = default_plant(n, dt)
    forcing = gaussian_forcing(plant.q, m, seed, forcing_scale)
    run = simulate(plant, x0_reduced, forcing, m, b_full=b_full)
    return SyntheticRun(
        run.snapshots, run.reduced, run.eigs_true, run.modes_true, run.b_true, plant, seed
    )


def add_noise(X: np.ndarray, eta: float, seed: int) -> np.ndarray:
    """Additive white measurement noise scaled to the data.

    The noise std is ``eta`` times the largest per-row standard deviation of
    X (the strongest spatial measurement sets the scale).  ``eta = 0``
    returns X unchanged.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    X = np.asarray(X, dtype=float)
    if eta == 0.0:
        return X.copy()
    sigma = eta * float(np.max(np.std(X, axis=1)))
    return X + sigma * rng_from(seed).standard_normal(X.shape)


# ---------------------------------------------------------------------------
# file formats


def save_matrix(M: np.ndarray, path) -> None:
    """Write one matrix in the package binary format.

    Layout: magic ``CDMC``, version u16, dtype u8 (0 real64 / 1 complex128),
    one reserved byte, rows u64, cols u64, then the payload column-major,
    everything little-endian.
    """
    M = np.atleast_2d(np.asarray(M))
    if np.iscomplexobj(M):
        code, payload = 1, M.astype(_DTYPES[1])
    else:
        code, payload = 0, M.astype(_DTYPES[0])
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, code, 0, M.shape[0], M.shape[1])
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes(order="F"))


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by :func:`save_matrix`, rejecting bad headers,
    short payloads, and non-finite entries."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: too short for a header ({len(raw)} bytes)")
    magic, version, code, _, rows, cols = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    if code not in _DTYPES:
        raise ValueError(f"{path}: unknown dtype code {code}")
    dtype = _DTYPES[code]
    expected = rows * cols * dtype.itemsize
    actual = len(raw) - _HEADER.size
    if actual != expected:
        raise ValueError(f"{path}: payload holds {actual} bytes, header promises {expected}")
    M = np.frombuffer(raw, dtype=dtype, offset=_HEADER.size).reshape((rows, cols), order="F")
    return _checked(M, path)


def _checked(M: np.ndarray, path) -> np.ndarray:
    if not np.all(np.isfinite(M)):
        bad = np.argwhere(~np.isfinite(M))[0]
        raise ValueError(f"{path}: non-finite entry at row {bad[0]}, column {bad[1]}")
    return M


def save_matrix_csv(M: np.ndarray, path) -> None:
    """Plain numeric grid, one row per line, no header.  %.17g survives a
    float64 round trip exactly."""
    np.savetxt(path, np.atleast_2d(np.asarray(M, dtype=float)), fmt="%.17g", delimiter=",")


def load_matrix_csv(path) -> np.ndarray:
    M = np.loadtxt(path, delimiter=",", ndmin=2)
    return _checked(M, path)


def save_snapshots(snaps: SnapshotSet, directory, format: str = "binary") -> Path:
    """Write a snapshot set as matrix files plus a JSON manifest.

    Returns the manifest path.  ``format`` is ``binary`` or ``csv``.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if format == "binary":
        ext, writer = ".cdmc", save_matrix
    elif format == "csv":
        ext, writer = ".csv", save_matrix_csv
    else:
        raise ValueError(f"unknown format {format!r}")
    files = {"X": "x" + ext, "Xp": "xp" + ext}
    writer(snaps.X, directory / files["X"])
    writer(snaps.Xp, directory / files["Xp"])
    if snaps.inputs is not None:
        files["inputs"] = "u" + ext
        writer(snaps.inputs, directory / files["inputs"])
    manifest = {
        "format": format,
        "dt": snaps.dt,
        "n": snaps.n,
        "m": snaps.m,
        "q": snaps.q,
        "files": files,
    }
    out = directory / "snapshots.json"
    out.write_text(json.dumps(manifest, indent=2) + "\n")
    return out


def load_snapshots(path) -> SnapshotSet:
    """Read a snapshot set from a manifest path or its directory."""
    path = Path(path)
    if path.is_dir():
        path = path / "snapshots.json"
    manifest = json.loads(path.read_text())
    reader = load_matrix if manifest["format"] == "binary" else load_matrix_csv
    base = path.parent
    X = reader(base / manifest["files"]["X"])
    Xp = reader(base / manifest["files"]["Xp"])
    inputs = None
    if "inputs" in manifest["files"]:
        inputs = reader(base / manifest["files"]["inputs"])
    loaded = SnapshotSet(X, Xp, inputs, manifest["dt"])
    if (loaded.n, loaded.m) != (manifest["n"], manifest["m"]):
        warnings.warn(
            f"{path}: manifest says {manifest['n']}x{manifest['m']}, "
            f"files hold {loaded.n}x{loaded.m}",
            stacklevel=2,
        )
    return loaded
