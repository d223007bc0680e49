"""Release gate: one test per shipped numerical claim.

Run `pytest tests/test_acceptance.py -v` to get one pass/fail line per claim;
add -s for the measured numbers behind each.  Every test states its tolerance
and its runtime budget and fails loudly if either is missed.
"""

import time

import numpy as np
import pytest

from dmdkit import (
    KINDS,
    CompressiveInputs,
    LowRankPlant,
    MeasurementSpec,
    SnapshotSet,
    SparseRecoveryConfig,
    actuation_error,
    add_noise,
    build_measurement,
    cdmdc,
    compress_with_spec,
    cosamp,
    dct_basis,
    dct_column,
    derive_seed,
    dmdc_known_b,
    dmdc_unknown_b,
    eig_errors,
    gaussian_forcing,
    mode_error,
    run_theorem_suite,
    simulate,
    toy_run,
)
from dmdkit.util import rng_from

P_REFERENCE = 128  # measurements used throughout the small-scale claims


def elapsed_guard(t0: float, budget: float, label: str) -> float:
    dt = time.perf_counter() - t0
    assert dt < budget, f"{label} took {dt:.1f}s, budget {budget:.0f}s"
    return dt


def measured_pair(op, snaps):
    return op.apply(snaps.X), op.apply(snaps.Xp)


def test_mode_and_actuation_tables_across_all_measurement_kinds(toy):
    """Noiseless reference run: every measurement kind, actuation knowledge,
    and fitting route returns the true modes to 1e-10 (and the true actuation
    to 1e-10 where it is identified rather than given)."""
    t0 = time.perf_counter()
    data = toy.snapshots
    recovery = SparseRecoveryConfig(sparsity=4, max_iterations=20)
    worst_mode = worst_b = 0.0
    cases = 0
    for kind in KINDS:
        op = build_measurement(
            MeasurementSpec(kind, P_REFERENCE, data.n, seed=derive_seed(1, KINDS.index(kind)))
        )
        Y, Yp = measured_pair(op, data)
        for b_known in (True, False):
            if b_known:
                fits = {
                    "full": dmdc_known_b(data, toy.b_true, r=2),
                    "compressed": cdmdc(CompressiveInputs(
                        Y, Yp, dt=data.dt, inputs=data.inputs, C=op,
                        full_state=(data.X, data.Xp), b_known=toy.b_true, r=2,
                    )),
                    "recovered": cdmdc(CompressiveInputs(
                        Y, Yp, dt=data.dt, inputs=data.inputs, C=op,
                        b_known=toy.b_true, r=2, recovery=recovery,
                    )),
                }
            else:
                fits = {
                    "full": dmdc_unknown_b(data, r=2, r_tilde=3),
                    "compressed": cdmdc(CompressiveInputs(
                        Y, Yp, dt=data.dt, inputs=data.inputs, C=op,
                        full_state=(data.X, data.Xp), r=2, r_tilde=3,
                    )),
                    "recovered": cdmdc(CompressiveInputs(
                        Y, Yp, dt=data.dt, inputs=data.inputs, C=op,
                        r=2, r_tilde=3, recovery=recovery,
                    )),
                }
            for label, model in fits.items():
                tag = f"{kind}/b_{'known' if b_known else 'unknown'}/{label}"
                err = mode_error(toy.modes_true, model.modes, toy.eigs_true, model.eigs)
                worst_mode = max(worst_mode, err)
                assert err < 1e-10, f"{tag}: mode error {err:.3e}"
                if not b_known:
                    berr = actuation_error(toy.b_true, model.b_hat)
                    worst_b = max(worst_b, berr)
                    assert berr < 1e-10, f"{tag}: actuation error {berr:.3e}"
                cases += 1
    dt = elapsed_guard(t0, 30.0, "table reproduction")
    print(f"\n{cases} fits: worst mode error {worst_mode:.3e}, "
          f"worst actuation error {worst_b:.3e} ({dt:.1f}s)")


def test_spiral_eigenvalue_recovery_through_gaussian_compression(toy):
    """Both identification routes return 0.9 +/- i sqrt(0.02) to 1e-8 from
    p = 128 Gaussian measurements."""
    t0 = time.perf_counter()
    data = toy.snapshots
    op = build_measurement(MeasurementSpec("gaussian", P_REFERENCE, data.n, seed=2))
    Y, Yp = measured_pair(op, data)
    full = dmdc_unknown_b(data, r=2, r_tilde=3)
    compressed = cdmdc(CompressiveInputs(
        Y, Yp, dt=data.dt, inputs=data.inputs, C=op,
        full_state=(data.X, data.Xp), r=2, r_tilde=3,
    ))
    target = np.array([0.9 + 1j * np.sqrt(0.02), 0.9 - 1j * np.sqrt(0.02)])
    worst = 0.0
    for label, model in (("full", full), ("compressed", compressed)):
        for lam in target:
            gap = np.abs(model.eigs - lam).min()
            worst = max(worst, gap)
            assert gap < 1e-8, f"{label}: |est - {lam:.4f}| = {gap:.3e}"
    dt = elapsed_guard(t0, 10.0, "eigenvalue recovery")
    print(f"\nworst absolute eigenvalue gap {worst:.3e} ({dt:.1f}s)")


def test_identity_suite_holds_across_kinds_and_seeds():
    """Every compression identity (factor bridges, commutation, actuation
    match, eigenpair survival, Markov chain k <= 5, controllability) holds
    with relative residual < 1e-8 on noiseless data: 4 kinds x 10 seeds."""
    t0 = time.perf_counter()
    total = 0
    worst = 0.0
    for seed in range(10):
        run = toy_run(seed=seed)
        for kind in KINDS:
            spec = MeasurementSpec(
                kind, P_REFERENCE, 1024, seed=derive_seed(seed, 100 + KINDS.index(kind))
            )
            reports = run_theorem_suite(run, spec, 2, 3)
            bad = [r for r in reports if not r.passed]
            assert not bad, f"seed {seed}/{kind}: {[(r.name, r.residual) for r in bad]}"
            worst = max(worst, max(r.residual for r in reports))
            total += len(reports)
    assert total == 520
    dt = elapsed_guard(t0, 60.0, "identity suite")
    print(f"\n{total} identity checks, worst residual {worst:.3e} ({dt:.1f}s)")


def test_sparse_recovery_success_rate_at_reference_scale():
    """Planted 4-sparse DCT vectors in n = 1024 are recovered from p = 128
    Gaussian measurements with relative error < 1e-4 in at least 95 of 100
    seeded trials."""
    t0 = time.perf_counter()
    n, k = 1024, 4
    psi = dct_basis(n)
    config = SparseRecoveryConfig(sparsity=k)
    errors = []
    for trial in range(100):
        op = build_measurement(
            MeasurementSpec("gaussian", P_REFERENCE, n, seed=derive_seed(4, trial))
        )
        rng = rng_from(derive_seed(5, trial))
        s_true = np.zeros(n)
        s_true[rng.choice(n, size=k, replace=False)] = rng.standard_normal(k)
        theta = op.apply(psi)
        s_hat = cosamp(theta, theta @ s_true, config)
        errors.append(np.linalg.norm(s_hat - s_true) / np.linalg.norm(s_true))
    errors = np.asarray(errors)
    successes = int(np.count_nonzero(errors < 1e-4))
    assert successes >= 95, f"only {successes}/100 trials under 1e-4"
    dt = elapsed_guard(t0, 60.0, "sparse recovery law")
    print(f"\n{successes}/100 recoveries under 1e-4 "
          f"(median error {np.median(errors):.3e}) ({dt:.1f}s)")


def test_lossless_compression_reproduces_full_identification(toy, lossless_op):
    """Single-pixel sampling with p = n keeps every coordinate; all four
    compressed branches then match the uncompressed fits to 1e-10 in
    spectrum, modes, and identified actuation."""
    t0 = time.perf_counter()
    data = toy.snapshots
    Y, Yp = measured_pair(lossless_op, data)
    recovery = SparseRecoveryConfig(sparsity=8, max_iterations=30)
    references = {
        True: dmdc_known_b(data, toy.b_true, r=2),
        False: dmdc_unknown_b(data, r=2, r_tilde=3),
    }
    branches = {
        (True, "compressed"): cdmdc(CompressiveInputs(
            Y, Yp, dt=data.dt, inputs=data.inputs, C=lossless_op,
            full_state=(data.X, data.Xp), b_known=toy.b_true, r=2,
        )),
        (True, "recovered"): cdmdc(CompressiveInputs(
            Y, Yp, dt=data.dt, inputs=data.inputs, C=lossless_op,
            b_known=toy.b_true, r=2, recovery=recovery,
        )),
        (False, "compressed"): cdmdc(CompressiveInputs(
            Y, Yp, dt=data.dt, inputs=data.inputs, C=lossless_op,
            full_state=(data.X, data.Xp), r=2, r_tilde=3,
        )),
        (False, "recovered"): cdmdc(CompressiveInputs(
            Y, Yp, dt=data.dt, inputs=data.inputs, C=lossless_op,
            r=2, r_tilde=3, recovery=recovery,
        )),
    }
    worst = 0.0
    for (b_known, label), model in branches.items():
        ref = references[b_known]
        tag = f"b_{'known' if b_known else 'unknown'}/{label}"
        spec_gap = eig_errors(ref.eigs, model.eigs).max()
        merr = mode_error(ref.modes, model.modes, ref.eigs, model.eigs)
        berr = actuation_error(ref.b_hat, model.b_hat)
        worst = max(worst, spec_gap, merr, berr)
        assert spec_gap < 1e-10, f"{tag}: spectrum gap {spec_gap:.3e}"
        assert merr < 1e-10, f"{tag}: mode gap {merr:.3e}"
        assert berr < 1e-10, f"{tag}: actuation gap {berr:.3e}"
    dt = elapsed_guard(t0, 30.0, "lossless equivalence")
    print(f"\nworst lossless deviation {worst:.3e} ({dt:.1f}s)")


def test_compression_amplifies_noise_in_the_expected_order():
    """Over 100 noise realizations on one clean trajectory: the compressed
    fit's median eigenvalue error exceeds the full-state fit's at eta = 0.1,
    and both medians grow from eta = 0.1 to eta = 0.5."""
    t0 = time.perf_counter()
    base = toy_run(seed=0)
    trajectory = np.column_stack([base.snapshots.X, base.snapshots.Xp[:, -1]])
    inputs = base.snapshots.inputs
    medians = {}
    for eta in (0.1, 0.5):
        tag = int(eta * 10)
        full_errors, compressed_errors = [], []
        for i in range(100):
            noisy = add_noise(trajectory, eta, derive_seed(60, tag, i))
            snaps = SnapshotSet.from_trajectory(noisy, 0.1, inputs)
            op = build_measurement(
                MeasurementSpec("gaussian", P_REFERENCE, 1024, seed=derive_seed(61, tag, i))
            )
            full = dmdc_unknown_b(snaps, r=2, r_tilde=3)
            compressed = cdmdc(CompressiveInputs(
                *measured_pair(op, snaps), dt=0.1, inputs=inputs, C=op,
                full_state=(snaps.X, snaps.Xp), r=2, r_tilde=3,
            ))
            full_errors.append(eig_errors(base.eigs_true, full.eigs).max())
            compressed_errors.append(eig_errors(base.eigs_true, compressed.eigs).max())
        medians[eta] = (float(np.median(full_errors)), float(np.median(compressed_errors)))
    assert medians[0.1][1] > medians[0.1][0], (
        f"compressed median {medians[0.1][1]:.3e} not above full {medians[0.1][0]:.3e}"
    )
    assert medians[0.1][0] < medians[0.5][0]
    assert medians[0.1][1] < medians[0.5][1]
    dt = elapsed_guard(t0, 120.0, "noise study")
    print(f"\nmedian eigenvalue error: eta=0.1 full {medians[0.1][0]:.3e} "
          f"compressed {medians[0.1][1]:.3e}; eta=0.5 full {medians[0.5][0]:.3e} "
          f"compressed {medians[0.5][1]:.3e} ({dt:.1f}s)")


def rank9_plant(n: int) -> LowRankPlant:
    """Four damped rotations plus one real mode, lifted by a random
    orthonormal basis: a rank-9 stand-in for flow data at full resolution."""
    A = np.zeros((9, 9))
    for i, (rho, theta) in enumerate([(0.98, 0.3), (0.95, 0.7), (0.90, 1.1), (0.85, 1.6)]):
        c, s = rho * np.cos(theta), rho * np.sin(theta)
        A[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = [[c, -s], [s, c]]
    A[8, 8] = 0.92
    # input couplings bounded away from zero: a starved mode would measure
    # its own excitation level instead of the compression
    rng = rng_from(derive_seed(70, 1))
    B = (rng.choice([-1.0, 1.0], size=(9, 1)) * rng.uniform(0.5, 1.5, size=(9, 1)))
    P = np.linalg.qr(rng_from(derive_seed(70, 2)).standard_normal((n, 9)))[0]
    return LowRankPlant(A, B, P, dt=0.1)


def test_large_scale_rank_nine_eigenvalue_recovery_and_sweep():
    """High-dimensional stand-in (n = 56,259 = 399 x 141, 251 snapshot pairs,
    2% measurement noise): at p/n = 0.10 the 10-seed median of the worst
    relative error over all nine eigenvalues is < 1e-3, and that median is
    nonincreasing across p/n in {0.01, 0.02, 0.05, 0.1, 0.2}."""
    t0 = time.perf_counter()
    n, m, eta = 56259, 251, 0.02
    ratios = (0.01, 0.02, 0.05, 0.1, 0.2)
    plant = rank9_plant(n)
    p_max = round(0.2 * n)
    errors = {ratio: [] for ratio in ratios}
    for seed in range(10):
        forcing = gaussian_forcing(1, m, derive_seed(71, seed))
        run = simulate(plant, 0.25 * np.ones(9), forcing)
        trajectory = np.column_stack([run.snapshots.X, run.snapshots.Xp[:, -1]])
        noisy = add_noise(trajectory, eta, derive_seed(72, seed))
        snaps = SnapshotSet.from_trajectory(noisy, 0.1, forcing)
        # one streamed compression at the largest p; row prefixes of a
        # Gaussian C are themselves Gaussian, and the constant scale offset
        # of a prefix cancels in the eigenvalue pipeline
        spec = MeasurementSpec("gaussian", p_max, n, seed=derive_seed(73, seed))
        Yt = compress_with_spec(spec, noisy, block_rows=1024)
        for ratio in ratios:
            p = round(ratio * n)
            model = cdmdc(CompressiveInputs(
                Yt[:p, :-1], Yt[:p, 1:], dt=0.1, inputs=forcing, C=None,
                full_state=(snaps.X, snaps.Xp), r=9, r_tilde=10,
            ))
            errors[ratio].append(float(eig_errors(run.eigs_true, model.eigs).max()))
    medians = [float(np.median(errors[r])) for r in ratios]
    at_tenth = medians[ratios.index(0.1)]
    assert at_tenth < 1e-3, f"median worst eigenvalue error at p/n=0.1: {at_tenth:.3e}"
    for a, b in zip(medians, medians[1:]):
        assert b <= a, f"median error rose along the compression sweep: {medians}"
    dt = elapsed_guard(t0, 300.0, "large-scale sweep")
    pretty = ", ".join(f"{r:g}: {e:.2e}" for r, e in zip(ratios, medians))
    spread = errors[0.1]
    print(f"\nmedian worst eigenvalue error by p/n {{{pretty}}}; "
          f"per-seed range at 0.1 [{min(spread):.2e}, {max(spread):.2e}] ({dt:.1f}s)")


def test_actuation_recovery_depends_on_sparsity(toy):
    """Sparse recovery of the actuation succeeds for B sparse in the mode
    support and for B sparse outside it, and reports failure (large surfaced
    residual plus a warning) for dense random B."""
    t0 = time.perf_counter()
    data = toy.snapshots
    op = build_measurement(MeasurementSpec("gaussian", P_REFERENCE, data.n, seed=8))

    # (a) the default actuation lies in the lifted mode span: 4-sparse
    model_a = cdmdc(CompressiveInputs(
        *measured_pair(op, data), dt=data.dt, inputs=data.inputs, C=op,
        r=2, r_tilde=3, recovery=SparseRecoveryConfig(sparsity=4, max_iterations=20),
    ))
    err_a = actuation_error(toy.b_true, model_a.b_hat)
    assert err_a < 1e-6, f"in-span actuation error {err_a:.3e}"

    # (b) actuation 2-sparse in wavenumbers disjoint from the mode support;
    # the forced direction adds a third data rank and a zero eigenvalue
    b_complement = 0.8 * dct_column(data.n, 7) - 0.5 * dct_column(data.n, 150)
    run_b = toy_run(seed=3, b_full=b_complement[:, None])
    data_b = run_b.snapshots
    op_b = build_measurement(MeasurementSpec("gaussian", P_REFERENCE, data.n, seed=9))
    model_b = cdmdc(CompressiveInputs(
        *measured_pair(op_b, data_b), dt=data_b.dt, inputs=data_b.inputs, C=op_b,
        r=3, r_tilde=4, recovery=SparseRecoveryConfig(sparsity=8, max_iterations=30),
    ))
    err_b = actuation_error(run_b.b_true, model_b.b_hat)
    assert err_b < 1e-6, f"complement-sparse actuation error {err_b:.3e}"

    # (c) dense random actuation is not sparse in any wavenumber set: the
    # recovery must say so rather than return a confident wrong answer
    b_dense = rng_from(derive_seed(74, 0)).standard_normal((data.n, 1))
    b_dense /= np.linalg.norm(b_dense)
    run_c = toy_run(seed=5, b_full=b_dense)
    data_c = run_c.snapshots
    op_c = build_measurement(MeasurementSpec("gaussian", P_REFERENCE, data.n, seed=10))
    with pytest.warns(UserWarning, match="sparse recovery failed"):
        model_c = cdmdc(CompressiveInputs(
            *measured_pair(op_c, data_c), dt=data_c.dt, inputs=data_c.inputs, C=op_c,
            r=3, r_tilde=4, recovery=SparseRecoveryConfig(sparsity=8, max_iterations=30),
        ))
    assert model_c.b_residuals.max() > 0.01, (
        f"dense-B failure not surfaced: residual {model_c.b_residuals.max():.3e}"
    )
    dt = elapsed_guard(t0, 60.0, "actuation study")
    print(f"\nactuation errors: in-span {err_a:.3e}, complement {err_b:.3e}, "
          f"dense residual {model_c.b_residuals.max():.3e} ({dt:.1f}s)")
