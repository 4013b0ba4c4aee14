import itertools

import numpy as np
import pytest

from spadeclip.feasible import detect_masks, hard_clip
from spadeclip.frames import make_frame
from spadeclip.metrics import sdr
from spadeclip.solvers import (
    SolverParams,
    Variant,
    aspade_step,
    hard_threshold,
    init_state,
    run_solver,
    sspade_dr_step,
    sspade_orig_step,
    step,
)


def sparse_clip_instance(n=64, clip_frac=0.5, seed=0):
    t = np.arange(n)
    x = (
        np.sin(2 * np.pi * 3 * t / n + 0.3)
        + 0.7 * np.sin(2 * np.pi * 7 * t / n + 1.1)
        + 0.4 * np.sin(2 * np.pi * 13 * t / n + 2.0)
    )
    theta = clip_frac * np.max(np.abs(x))
    return x, detect_masks(hard_clip(x, theta), theta, delta_detect=0.0)


# ---------------------------------------------------------------- hard_threshold


def test_hard_threshold_example():
    out = hard_threshold(np.array([3, -1, 4j, 0.5]), 2)
    np.testing.assert_array_equal(out, [3, 0, 4j, 0])


def test_hard_threshold_passthrough_when_k_large():
    s = np.array([1.0 + 1j, 0, 2.0])
    np.testing.assert_array_equal(hard_threshold(s, 3), s)
    np.testing.assert_array_equal(hard_threshold(s, 10), s)


def test_hard_threshold_k_zero_and_negative():
    assert np.all(hard_threshold(np.array([1.0, 2.0]), 0) == 0)
    with pytest.raises(ValueError):
        hard_threshold(np.array([1.0]), -1)


def test_hard_threshold_tie_keeps_lower_index():
    out = hard_threshold(np.array([1.0, -1.0, 1.0]), 2)
    np.testing.assert_array_equal(out, [1.0, -1.0, 0.0])


def test_hard_threshold_matches_support_enumeration():
    # the objective of any support is the energy of the dropped entries
    rng = np.random.default_rng(0)
    for p in range(1, 11):
        for k in range(0, min(3, p) + 1):
            for _ in range(50):
                s = rng.standard_normal(p) + 1j * rng.standard_normal(p)
                obj = np.linalg.norm(hard_threshold(s, k) - s) ** 2
                best = min(
                    sum(abs(s[j]) ** 2 for j in range(p) if j not in supp)
                    for supp in itertools.combinations(range(p), min(k, p))
                )
                assert abs(obj - best) <= 1e-12


# ---------------------------------------------------------------- single steps


def test_aspade_all_reliable_pins_estimate():
    rng = np.random.default_rng(1)
    y = rng.standard_normal(32)
    y /= 2 * np.max(np.abs(y))
    model = detect_masks(y, 1.0, 0.0)
    op = make_frame(32, 2)
    params = SolverParams(s=1, r=1, epsilon=1e-12, variant=Variant.ASPADE)
    state = init_state(model, op, params)
    for _ in range(5):
        state = aspade_step(state, model, op, params)
        np.testing.assert_array_equal(state.x_hat, y)


def test_aspade_full_sparsity_converges_first_iteration():
    _, model = sparse_clip_instance()
    op = make_frame(64, 2)
    params = SolverParams(s=op.coeff_len, variant=Variant.ASPADE)
    state = aspade_step(init_state(model, op, params), model, op, params)
    assert state.residual <= 1e-10
    np.testing.assert_allclose(state.x_hat, model.y, atol=1e-10)


def test_aspade_first_step_matches_dense_matrix_reference():
    # even sparsity: an odd cut would fall between the near-equal magnitudes
    # of a conjugate bin pair, where fft and dense-matrix rounding may
    # order differently
    n = 16
    t = np.arange(n)
    x = np.sin(2 * np.pi * 3 * t / n + 0.3) + 0.6 * np.sin(2 * np.pi * 5 * t / n + 1.1)
    theta = 0.5 * np.max(np.abs(x))
    model = detect_masks(hard_clip(x, theta), theta, delta_detect=0.0)
    op = make_frame(16, 2)
    p = op.coeff_len
    a_mat = np.exp(
        -2j * np.pi * np.outer(np.arange(p), np.arange(16)) / p
    ) / np.sqrt(p)

    params = SolverParams(s=4, variant=Variant.ASPADE)
    state = aspade_step(init_state(model, op, params), model, op, params)

    # matrix-form reference for one step from u=0, x_hat=y
    c = a_mat @ model.y
    z_ref = np.zeros(p, dtype=complex)
    keep = np.argsort(-np.abs(c), kind="stable")[:4]
    z_ref[keep] = c[keep]
    v = np.real(a_mat.conj().T @ z_ref)
    x_ref = v.copy()
    x_ref[model.mask_r] = model.y[model.mask_r]
    x_ref[model.mask_h] = np.maximum(v[model.mask_h], model.theta)
    x_ref[model.mask_l] = np.minimum(v[model.mask_l], -model.theta)
    u_ref = a_mat @ x_ref - z_ref

    np.testing.assert_allclose(state.z_bar, z_ref, atol=1e-10)
    np.testing.assert_allclose(state.x_hat, x_ref, atol=1e-10)
    np.testing.assert_allclose(state.u, u_ref, atol=1e-10)


def test_sspade_orig_all_reliable_unitary_returns_y():
    rng = np.random.default_rng(2)
    y = rng.standard_normal(32)
    y /= 2 * np.max(np.abs(y))
    model = detect_masks(y, 1.0, 0.0)
    op = make_frame(32, 1)
    result = run_solver(model, op, SolverParams(variant=Variant.SSPADE_ORIG, epsilon=1e-8))
    np.testing.assert_allclose(result.x_restored, y, atol=1e-8)


def test_sspade_orig_full_sparsity_converges_first_iteration():
    _, model = sparse_clip_instance()
    op = make_frame(64, 2)
    params = SolverParams(s=op.coeff_len, variant=Variant.SSPADE_ORIG)
    state = sspade_orig_step(init_state(model, op, params), model, op, params)
    assert state.residual <= 1e-10
    np.testing.assert_allclose(state.x_hat, model.y, atol=1e-10)


def test_sspade_dr_all_reliable_pins_estimate():
    rng = np.random.default_rng(3)
    y = rng.standard_normal(32)
    y /= 2 * np.max(np.abs(y))
    model = detect_masks(y, 1.0, 0.0)
    op = make_frame(32, 2)
    params = SolverParams(s=2, epsilon=1e-12, variant=Variant.SSPADE_DR)
    state = init_state(model, op, params)
    for _ in range(5):
        state = sspade_dr_step(state, model, op, params)
        np.testing.assert_array_equal(state.x_hat, y)


def test_sspade_dr_full_sparsity_unitary_converges_first_iteration():
    _, model = sparse_clip_instance()
    op = make_frame(64, 1)
    params = SolverParams(s=64, variant=Variant.SSPADE_DR)
    state = sspade_dr_step(init_state(model, op, params), model, op, params)
    assert state.residual <= 1e-10
    np.testing.assert_allclose(state.x_hat, model.y, atol=1e-10)


def test_sspade_dr_approximation_bound_every_iteration():
    # time-domain approximation error never exceeds the coefficient-domain one
    _, model = sparse_clip_instance()
    op = make_frame(64, 2)
    params = SolverParams(s=1, r=1, epsilon=0.0, variant=Variant.SSPADE_DR)
    state = init_state(model, op, params)
    for _ in range(100):
        target = state.x_hat - state.u
        state = sspade_dr_step(state, model, op, params)
        time_err = np.linalg.norm(op.synthesize(state.z_bar) - target)
        coef_err = np.linalg.norm(state.z_bar - op.analyze(target))
        assert time_err <= coef_err + 1e-12


def test_zbar_sparsity_bound_every_variant():
    _, model = sparse_clip_instance()
    for variant in Variant:
        op = make_frame(64, 2)
        params = SolverParams(s=2, r=3, epsilon=0.0, variant=variant)
        state = init_state(model, op, params)
        for _ in range(30):
            state = step(state, model, op, params)
            assert np.count_nonzero(state.z_bar) <= state.k


def test_sparsity_schedule_monotone():
    _, model = sparse_clip_instance()
    op = make_frame(64, 2)
    params = SolverParams(s=2, r=3, epsilon=0.0, variant=Variant.ASPADE)
    state = init_state(model, op, params)
    ks = [state.k]
    for _ in range(30):
        state = step(state, model, op, params)
        ks.append(state.k)
    assert ks[0] == 2
    for a, b in zip(ks, ks[1:]):
        assert b in (a, a + 2)
    # k grows by exactly s every r completed iterations
    assert ks[30] == 2 + 2 * (30 // 3)


# ---------------------------------------------------------------- run_solver


@pytest.mark.parametrize("variant", list(Variant))
def test_run_solver_improves_sdr_on_sparse_signal(variant):
    n = 256
    t = np.arange(n)
    x = (
        np.sin(2 * np.pi * 4 * t / n + 0.2)
        + 0.6 * np.sin(2 * np.pi * 11 * t / n + 1.0)
        + 0.35 * np.sin(2 * np.pi * 23 * t / n + 2.1)
    )
    theta = 0.3 * np.max(np.abs(x))
    y = hard_clip(x, theta)
    model = detect_masks(y, theta, delta_detect=0.0)
    op = make_frame(n, 2)
    result = run_solver(model, op, SolverParams(s=1, r=1, epsilon=0.1, variant=variant))
    assert sdr(x, result.x_restored) >= sdr(x, y) + 10.0


@pytest.mark.parametrize("variant", list(Variant))
def test_run_solver_unclipped_returns_y(variant):
    rng = np.random.default_rng(4)
    y = rng.standard_normal(64)
    y /= 2 * np.max(np.abs(y))
    model = detect_masks(y, 1.0, 0.0)
    op = make_frame(64, 2)
    result = run_solver(model, op, SolverParams(variant=variant, epsilon=0.1))
    assert result.converged
    np.testing.assert_allclose(result.x_restored, y, atol=1e-8)
    np.testing.assert_array_equal(result.x_restored[model.mask_r], y[model.mask_r])


@pytest.mark.parametrize("variant", list(Variant))
def test_run_solver_full_sparsity_one_iteration(variant):
    _, model = sparse_clip_instance()
    op = make_frame(64, 2)
    result = run_solver(
        model, op, SolverParams(s=op.coeff_len, epsilon=0.1, variant=variant)
    )
    assert result.converged
    assert result.iterations == 1


@pytest.mark.parametrize("variant", list(Variant))
def test_run_solver_halts_when_capped(variant):
    rng = np.random.default_rng(5)
    y = hard_clip(rng.standard_normal(32), 0.4)  # noise: not sparse, won't converge
    model = detect_masks(y, 0.4, 0.0)
    op = make_frame(32, 2)
    result = run_solver(
        model, op, SolverParams(s=4, r=1, epsilon=1e-12, variant=variant)
    )
    assert not result.converged
    assert np.isfinite(result.final_residual)


@pytest.mark.parametrize("variant", list(Variant))
def test_run_solver_output_feasible_exactly(variant):
    _, model = sparse_clip_instance()
    op = make_frame(64, 2)
    result = run_solver(model, op, SolverParams(epsilon=0.1, variant=variant))
    x = result.x_restored
    np.testing.assert_array_equal(x[model.mask_r], model.y[model.mask_r])
    assert np.all(x[model.mask_h] >= model.theta)
    assert np.all(x[model.mask_l] <= -model.theta)


def test_aspade_projected_synthesis_solves_analysis_projection():
    # argmin over the feasible set of ||Ax - s|| is the componentwise
    # projection of the synthesized coefficients
    from spadeclip.feasible import project_gamma

    _, model = sparse_clip_instance(n=16)
    op = make_frame(16, 2)
    rng = np.random.default_rng(6)
    for _ in range(20):
        s = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        x_star = project_gamma(op.synthesize(s), model)
        obj = np.linalg.norm(op.analyze(x_star) - s)
        for _ in range(100):
            w = project_gamma(rng.standard_normal(16), model)
            assert obj <= np.linalg.norm(op.analyze(w) - s) + 1e-10


def test_scaled_form_identity_random_trials():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 20))
        r = rng.standard_normal(n)
        y = rng.standard_normal(n)
        rho = float(rng.uniform(0.05, 20))
        lhs = y @ r + 0.5 * rho * np.linalg.norm(r) ** 2
        rhs = (
            0.5 * rho * np.linalg.norm(r + y / rho) ** 2
            - 0.5 * rho * np.linalg.norm(y / rho) ** 2
        )
        assert abs(lhs - rhs) <= 1e-12
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert abs(
            np.linalg.norm(c) ** 2
            - np.linalg.norm(np.concatenate([c.real, c.imag])) ** 2
        ) <= 1e-12


def test_solver_params_validation():
    with pytest.raises(ValueError):
        SolverParams(s=0)
    with pytest.raises(ValueError):
        SolverParams(r=0)
    with pytest.raises(ValueError):
        SolverParams(epsilon=-1.0)
    with pytest.raises(ValueError):
        SolverParams(max_k=0)
