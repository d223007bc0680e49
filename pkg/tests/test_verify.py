"""Identity checks, error metrics, and the full theorem suite on synthetic
data with known structure."""

import json

import numpy as np
import pytest

from dmdkit import (
    MeasurementSpec,
    SnapshotSet,
    actuation_error,
    build_measurement,
    controllability,
    eig_errors,
    mode_error,
    pair_modes,
    run_theorem_suite,
    theorem_suite,
)
from dmdkit.verify import (
    FactoredOperator,
    check_actuation_match,
    check_compressed_eigenpairs,
    check_markov_parameters,
    controllability_matrix,
)

SUITE_NAMES = {
    "state_factor_bridge",
    "input_factor_bridge",
    "dynamics_commute",
    "actuation_match",
    "compressed_eigenpair",
    "markov_parameter",
    "controllability_compression",
}


class TestFactoredOperator:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.F = [rng.standard_normal(s) for s in [(6, 4), (4, 9), (9, 3)]]
        self.dense = self.F[0] @ self.F[1] @ self.F[2]
        self.op = FactoredOperator(*self.F)

    def test_shape(self):
        assert self.op.shape == (6, 3)

    def test_apply_matches_dense(self):
        M = np.random.default_rng(1).standard_normal((3, 5))
        assert np.allclose(self.op.apply(M), self.dense @ M, atol=1e-12)

    def test_adjoint_matches_dense(self):
        M = np.random.default_rng(2).standard_normal((6, 5))
        assert np.allclose(self.op.apply_adjoint(M), self.dense.conj().T @ M, atol=1e-12)

    def test_spectral_norm(self):
        assert self.op.norm2() == pytest.approx(np.linalg.norm(self.dense, 2), rel=1e-6)

    def test_zero_operator_norm(self):
        assert FactoredOperator(np.zeros((3, 3))).norm2() == 0.0

    def test_rejects_mismatched_factors(self):
        with pytest.raises(ValueError, match="chain"):
            FactoredOperator(np.ones((2, 3)), np.ones((4, 2)))

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="factor"):
            FactoredOperator()


class TestPairingMetrics:
    def test_pair_modes_handles_swapped_order(self):
        ref = np.array([1.0 + 0j, 2.0 + 0j])
        est = np.array([2.01 + 0j, 0.99 + 0j])
        rows, cols = pair_modes(ref, est)
        assert list(rows) == [0, 1]
        assert list(cols) == [1, 0]

    def test_pairing_beyond_assignment_limit(self):
        # 15 eigenvalues exercise the greedy fallback path
        rng = np.random.default_rng(4)
        ref = rng.standard_normal(15) + 1j * rng.standard_normal(15)
        perm = rng.permutation(15)
        assert eig_errors(ref, ref[perm]).max() < 1e-14

    def test_eig_errors_relative_and_absolute(self):
        ref = np.array([0.0 + 0j, 2.0 + 0j])
        est = np.array([1e-3 + 0j, 2.0 + 0j])
        errors = eig_errors(ref, est)
        assert errors[0] == pytest.approx(1e-3, abs=1e-15)  # absolute at zero
        assert errors[1] == 0.0

    def test_mode_error_zero_on_identical_sets(self):
        Phi = np.linalg.qr(np.random.default_rng(5).standard_normal((20, 3)))[0]
        assert mode_error(Phi, Phi) == pytest.approx(0.0, abs=1e-15)

    def test_mode_error_invariances(self):
        # permutation (via eigenvalue pairing), complex phase, and scale
        rng = np.random.default_rng(6)
        Phi = np.linalg.qr(rng.standard_normal((20, 3)) + 1j * rng.standard_normal((20, 3)))[0]
        eigs = np.array([0.9, 0.5 + 0.1j, 0.2])
        perm = np.array([2, 0, 1])
        scales = np.array([2.0 * np.exp(1j * 0.7), -3.0, 0.5j])
        mangled = Phi[:, perm] * scales
        assert mode_error(Phi, mangled, eigs, eigs[perm]) < 1e-12

    def test_mode_error_epsilon_perturbation(self):
        # perturb each unit column by eps along an orthogonal unit direction;
        # after least-squares alignment the error is exactly eps/sqrt(1+eps^2),
        # which is eps to first order
        rng = np.random.default_rng(7)
        Q = np.linalg.qr(rng.standard_normal((30, 6)))[0]
        Phi, V = Q[:, :3], Q[:, 3:]
        eps = 1e-3
        err = mode_error(Phi, Phi + eps * V)
        assert err == pytest.approx(eps / np.sqrt(1 + eps**2), abs=1e-12)
        assert err == pytest.approx(eps, rel=1e-5)

    def test_mode_error_shape_mismatch_needs_eigenvalues(self):
        with pytest.raises(ValueError, match="shape"):
            mode_error(np.ones((4, 2)), np.ones((4, 3)))

    def test_actuation_error_values(self):
        assert actuation_error(np.array([[1.0], [0.0]]), np.zeros((2, 1))) == 1.0
        with pytest.raises(ValueError, match="mismatch"):
            actuation_error(np.ones((2, 1)), np.ones((3, 1)))


class TestControllability:
    def test_toy_plant_is_controllable(self, toy):
        _, rank = controllability(toy.plant.atilde, toy.plant.btilde)
        assert rank == 2

    def test_zero_actuation_rank(self):
        _, rank = controllability(np.diag([0.9, 0.5]), np.zeros((2, 1)))
        assert rank == 0

    def test_rank_is_similarity_invariant(self):
        rng = np.random.default_rng(8)
        for trial in range(5):
            n = 5
            A = rng.standard_normal((n, n))
            B = rng.standard_normal((n, 2))
            T = rng.standard_normal((n, n)) + n * np.eye(n)
            _, rank = controllability(A, B)
            _, rank_t = controllability(T @ A @ np.linalg.inv(T), T @ B)
            assert rank == rank_t, f"trial {trial}"

    def test_matrix_blocks(self):
        A = np.diag([2.0, 3.0])
        B = np.array([[1.0], [1.0]])
        ctrb = controllability_matrix(A, B, horizon=3)
        assert np.array_equal(ctrb, [[1.0, 2.0, 4.0], [1.0, 3.0, 9.0]])

    def test_flat_actuation_promoted_to_column(self):
        ctrb = controllability_matrix(np.eye(2), np.array([1.0, 2.0]), horizon=2)
        assert ctrb.shape == (2, 2)

    def test_horizon_validation(self):
        with pytest.raises(ValueError, match="horizon"):
            controllability_matrix(np.eye(2), np.ones((2, 1)), horizon=0)
        with pytest.raises(ValueError, match="horizon"):
            controllability_matrix(FactoredOperator(np.eye(2)), np.ones((2, 1)))


class TestIndividualChecks:
    def test_zero_actuation_is_exactly_consistent(self, gaussian_op):
        # both sides vanish; the guarded denominator reports residual 0
        report = check_actuation_match(np.zeros((1024, 1)), np.zeros((128, 1)), gaussian_op)
        assert report.residual == 0.0
        assert report.passed

    def test_markov_anchor_equals_actuation_residual(self, gaussian_op):
        rng = np.random.default_rng(9)
        B = rng.standard_normal((1024, 1))
        B_Y = gaussian_op.apply(B) + 1e-5 * rng.standard_normal((128, 1))
        A = FactoredOperator(np.eye(1024))
        A_Y = FactoredOperator(np.eye(128))
        anchor = check_markov_parameters(A, B, A_Y, B_Y, gaussian_op, k_max=0)[0]
        direct = check_actuation_match(B, B_Y, gaussian_op)
        assert anchor.detail["k"] == 0
        assert anchor.residual == pytest.approx(direct.residual, rel=1e-12)

    def test_markov_rejects_negative_horizon(self, gaussian_op):
        A = FactoredOperator(np.eye(1024))
        A_Y = FactoredOperator(np.eye(128))
        with pytest.raises(ValueError, match="k_max"):
            check_markov_parameters(A, np.ones((1024, 1)), A_Y, np.ones((128, 1)),
                                    gaussian_op, k_max=-1)

    def test_annihilated_eigenvector_is_flagged_trivial(self):
        op = build_measurement(MeasurementSpec("single_pixel", 4, 16, seed=2))
        kept = {int(np.argmax(row)) for row in op.C}
        dropped = next(j for j in range(16) if j not in kept)
        phi = np.zeros((16, 1))
        phi[dropped] = 1.0
        reports = check_compressed_eigenpairs(phi, np.array([0.9]), FactoredOperator(np.eye(4)), op)
        assert reports[0].trivial
        assert reports[0].passed
        assert reports[0].residual == 0.0


class TestTheoremSuite:
    def test_requires_control_record(self, lossless_op, toy):
        data = toy.snapshots
        autonomous = SnapshotSet(data.X, data.Xp, None, data.dt)
        with pytest.raises(ValueError, match="control record"):
            theorem_suite(autonomous, lossless_op, 2, 3)

    def test_lossless_compression_passes_everything(self, toy, lossless_op):
        reports = theorem_suite(toy.snapshots, lossless_op, 2, 3)
        assert all(r.passed for r in reports)
        assert max(r.residual for r in reports) < 1e-10

    def test_gaussian_compression_passes_everything(self, toy):
        spec = MeasurementSpec("gaussian", 128, 1024, seed=12)
        reports = run_theorem_suite(toy, spec, 2, 3)
        assert len(reports) == 13  # 4 identities + 2 eigenpairs + 6 markov + 1
        assert {r.name for r in reports} == SUITE_NAMES
        assert all(r.passed for r in reports)
        assert max(r.residual for r in reports) < 1e-8

    def test_reports_carry_assumption_scores(self, toy):
        spec = MeasurementSpec("uniform", 128, 1024, seed=13)
        reports = run_theorem_suite(toy, spec, 2, 3)
        for r in reports:
            for key in ("row_space", "output_span", "input_span"):
                assert key in r.detail
                assert r.detail[key] < 1e-8

    def test_noise_breaks_identities_and_scores_say_so(self, toy):
        spec = MeasurementSpec("gaussian", 128, 1024, seed=12)
        clean = run_theorem_suite(toy, spec, 2, 3)
        noisy = run_theorem_suite(toy, spec, 2, 3, eta=0.5, noise_seed=77)
        assert any(not r.passed for r in noisy)
        assert noisy[0].detail["row_space"] > 100 * clean[0].detail["row_space"]

    def test_violated_span_assumption_is_detected(self, toy, lossless_op):
        # successor snapshots replaced by unrelated data: X' no longer lies
        # anywhere near the span the identities need
        data = toy.snapshots
        garbage = np.random.default_rng(3).standard_normal(data.Xp.shape)
        broken = SnapshotSet(data.X, garbage, data.inputs, data.dt)
        reports = theorem_suite(broken, lossless_op, 2, 3)
        assert any(not r.passed for r in reports)
        assert reports[0].detail["output_span"] > 1e-2

    def test_tolerance_is_respected(self, toy, lossless_op):
        reports = theorem_suite(toy.snapshots, lossless_op, 2, 3, tol=1e-300)
        scored = [r for r in reports if not r.trivial]
        assert any(not r.passed for r in scored)

    def test_reports_serialize_to_json(self, toy, lossless_op):
        reports = theorem_suite(toy.snapshots, lossless_op, 2, 3)
        text = json.dumps([r.to_dict() for r in reports])
        assert json.loads(text)[0]["name"] == "state_factor_bridge"

    def test_horizon_and_depth_flow_through(self, toy, lossless_op):
        reports = theorem_suite(toy.snapshots, lossless_op, 2, 3, k_max=2, horizon=4)
        markov = [r for r in reports if r.name == "markov_parameter"]
        ctrb = [r for r in reports if r.name == "controllability_compression"]
        assert [r.detail["k"] for r in markov] == [0, 1, 2]
        assert ctrb[0].detail["horizon"] == 4
