"""Independent oracles for the algebraic identities the solvers rely on.

Every check here avoids the FFT code path: frames are realized as dense
DFT matrices built entry by entry, sparse least squares is solved by
exhaustive support enumeration, and projection optimality is tested
against random feasible candidates. Checks are deterministic given the
seed and are driven both by the test suite and the `verify` CLI
subcommand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .feasible import ClipModel, detect_masks, hard_clip, project_gamma
from .frames import FrameKind, FrameOperator, make_frame
from .solvers import (
    SolverParams,
    Variant,
    hard_threshold,
    init_state,
    step,
)

__all__ = [
    "OracleConfig",
    "CheckReport",
    "dense_analysis_matrix",
    "dense_synthesis_matrix",
    "brute_force_sparse_ls",
    "check_scaled_form",
    "check_projection_transposition",
    "check_unitary_equivalence",
    "make_test_model",
    "run_all_checks",
]


@dataclass(frozen=True)
class OracleConfig:
    n_trials: int = 100
    seed: int = 0
    tol_strict: float = 1e-12
    tol_numeric: float = 1e-9

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be positive")
        if not 0 < self.tol_strict <= self.tol_numeric:
            raise ValueError("need 0 < tol_strict <= tol_numeric")


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<38} max dev {self.max_deviation:.3e}  tol {self.tolerance:.1e}"


def dense_analysis_matrix(op: FrameOperator) -> np.ndarray:
    """P x N analysis matrix built entrywise, independent of any FFT."""
    p, n = op.coeff_len, op.signal_len
    rows = np.arange(p).reshape(-1, 1)
    cols = np.arange(n).reshape(1, -1)
    return np.exp(-2j * np.pi * rows * cols / p) / np.sqrt(p)


def dense_synthesis_matrix(op: FrameOperator) -> np.ndarray:
    """N x P complex synthesis matrix (conjugate transpose of analysis)."""
    return dense_analysis_matrix(op).conj().T


def brute_force_sparse_ls(
    dictionary: np.ndarray, target: np.ndarray, k: int
) -> tuple[tuple[int, ...], np.ndarray, float]:
    """Exact k-sparse least squares by enumerating all supports.

    Minimizes ||dictionary @ z - target||^2 over complex z with at most k
    nonzeros; returns (support, full-length coefficients, squared
    objective). Sizes are capped because the enumeration is combinatorial.
    """
    dictionary = np.asarray(dictionary, dtype=complex)
    target = np.asarray(target, dtype=complex)
    n, p = dictionary.shape
    if p > 14 or k > 3:
        raise ValueError(f"enumeration limited to p <= 14, k <= 3 (got p={p}, k={k})")
    if k == 0:
        return (), np.zeros(p, dtype=complex), float(np.linalg.norm(target) ** 2)
    best = ((), np.zeros(p, dtype=complex), float(np.linalg.norm(target) ** 2))
    for support in itertools.combinations(range(p), k):
        cols = dictionary[:, support]
        coef, _, _, _ = np.linalg.lstsq(cols, target, rcond=None)
        obj = float(np.linalg.norm(cols @ coef - target) ** 2)
        if obj < best[2]:
            z = np.zeros(p, dtype=complex)
            z[list(support)] = coef
            best = (support, z, obj)
    return best


def check_scaled_form(config: OracleConfig) -> CheckReport:
    """Scaled-dual rewriting of the augmented Lagrangian penalty terms.

    For random real r, y and rho > 0, the identity
    y.r + (rho/2)||r||^2 = (rho/2)||r + y/rho||^2 - (rho/2)||y/rho||^2
    must hold to strict tolerance, as must the equality of a complex
    vector's norm with the norm of its stacked real/imaginary parts.
    """
    rng = np.random.default_rng(config.seed)
    max_dev = 0.0
    for _ in range(config.n_trials):
        n = int(rng.integers(1, 33))
        r = rng.standard_normal(n)
        y = rng.standard_normal(n)
        rho = float(rng.uniform(0.1, 10.0))
        lhs = y @ r + 0.5 * rho * np.linalg.norm(r) ** 2
        u = y / rho
        rhs = 0.5 * rho * np.linalg.norm(r + u) ** 2 - 0.5 * rho * np.linalg.norm(u) ** 2
        max_dev = max(max_dev, abs(lhs - rhs))
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        stacked = np.concatenate([c.real, c.imag])
        max_dev = max(
            max_dev, abs(np.linalg.norm(c) ** 2 - np.linalg.norm(stacked) ** 2)
        )
    return CheckReport(
        "scaled-form identity", max_dev <= config.tol_strict, max_dev, config.tol_strict
    )


def check_projection_transposition(
    op: FrameOperator, model: ClipModel, config: OracleConfig
) -> CheckReport:
    """Transposed form of the analysis-variant projection step.

    For random coefficient vectors s, (a) s - A(A*s) must be orthogonal to
    the range of the analysis operator, and (b) projecting A*s onto the
    feasible set must attain an ||Ax - s|| objective no worse than any
    random feasible candidate.
    """
    rng = np.random.default_rng(config.seed)
    p = op.coeff_len
    max_ortho = 0.0
    max_gap = 0.0
    n_s = max(1, config.n_trials // 5)
    for _ in range(n_s):
        s = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        xi = op.synthesize(s)
        eps_comp = s - op.analyze(xi)
        for _ in range(20):
            omega = rng.standard_normal(op.signal_len)
            ip = float(np.real(np.vdot(op.analyze(omega), eps_comp)))
            max_ortho = max(max_ortho, abs(ip))
        proj_obj = np.linalg.norm(op.analyze(project_gamma(xi, model)) - s)
        for _ in range(config.n_trials):
            cand = project_gamma(rng.standard_normal(op.signal_len), model)
            max_gap = max(max_gap, proj_obj - np.linalg.norm(op.analyze(cand) - s))
    dev = max(max_ortho, max_gap)
    return CheckReport(
        "projection transposition", dev <= config.tol_numeric, dev, config.tol_numeric
    )


def make_test_model(
    n: int = 64, clip_frac: float = 0.5, harmonics=(3, 7, 13), amps=(1.0, 0.7, 0.4),
    phases=(0.3, 1.1, 2.0),
) -> ClipModel:
    """Clipped sparse test signal used by the cross-variant checks.

    Odd integer harmonics make the signal half-wave symmetric, so its
    spectrum has no energy at the self-conjugate DFT bins and thresholding
    with an even sparsity target keeps conjugate bin pairs together.
    """
    t = np.arange(n)
    x = sum(
        a * np.sin(2 * np.pi * f * t / n + ph)
        for a, f, ph in zip(amps, harmonics, phases)
    )
    theta = clip_frac * np.max(np.abs(x))
    return detect_masks(hard_clip(x, theta), theta, delta_detect=0.0)


def check_unitary_equivalence(
    model: ClipModel,
    params: SolverParams,
    n_iters: int = 200,
    op: FrameOperator | None = None,
) -> float:
    """Max deviation of the synthesis variants' iterates from the analysis one.

    Runs all three variants in lockstep on a unitary frame with a shared
    sparsity schedule and compares the time-domain estimates per
    iteration. Refuses a redundant frame.
    """
    n = len(model)
    if op is None:
        op = make_frame(n, 1)
    if op.kind is not FrameKind.UNITARY_DFT or op.signal_len != n:
        raise ValueError("equivalence check requires a unitary frame over the model")
    # the termination test must never fire, or the variants' schedules desync
    lockstep = replace(params, epsilon=0.0)
    states = {
        v: init_state(model, op, replace(lockstep, variant=v)) for v in Variant
    }
    max_dev = 0.0
    for _ in range(n_iters):
        for v in Variant:
            states[v] = step(states[v], model, op, replace(lockstep, variant=v))
        x_ref = states[Variant.ASPADE].x_hat
        for v in (Variant.SSPADE_ORIG, Variant.SSPADE_DR):
            max_dev = max(max_dev, float(np.linalg.norm(states[v].x_hat - x_ref)))
    return max_dev


def _check_parseval_dense(config: OracleConfig) -> CheckReport:
    """Frame identities against the dense matrix realization."""
    rng = np.random.default_rng(config.seed)
    max_dev = 0.0
    for n, red in [(8, 1), (8, 2), (12, 1.5), (16, 4)]:
        op = make_frame(n, red)
        a = dense_analysis_matrix(op)
        d = dense_synthesis_matrix(op)
        gram = d @ a
        max_dev = max(max_dev, float(np.max(np.abs(gram - np.eye(n)))))
        for _ in range(max(1, config.n_trials // 10)):
            x = rng.standard_normal(n)
            max_dev = max(max_dev, float(np.max(np.abs(op.analyze(x) - a @ x))))
            c = rng.standard_normal(op.coeff_len) + 1j * rng.standard_normal(op.coeff_len)
            max_dev = max(
                max_dev, float(np.max(np.abs(op.synthesize(c) - np.real(d @ c))))
            )
    return CheckReport(
        "tight frame vs dense matrices",
        max_dev <= config.tol_numeric,
        max_dev,
        config.tol_numeric,
    )


def _check_sparse_approximation(config: OracleConfig) -> CheckReport:
    """Thresholded analysis coefficients vs exact sparse least squares.

    On a unitary dictionary the thresholding objective must match the
    enumerated optimum; on a redundant one it must upper-bound it while
    staying below its own coefficient-domain bound.
    """
    rng = np.random.default_rng(config.seed)
    max_dev = 0.0
    trials = max(1, config.n_trials // 20)
    for _ in range(trials):
        op_u = make_frame(8, 1)
        d_u = dense_synthesis_matrix(op_u)
        t = rng.standard_normal(8)
        for k in (1, 2, 3):
            _, _, obj = brute_force_sparse_ls(d_u, t, k)
            approx = hard_threshold(d_u.conj().T @ t, k)
            obj_h = float(np.linalg.norm(d_u @ approx - t) ** 2)
            max_dev = max(max_dev, abs(obj - obj_h))

        op_r = make_frame(4, 2)
        d_r = dense_synthesis_matrix(op_r)
        t = rng.standard_normal(4)
        for k in (1, 2):
            _, _, obj = brute_force_sparse_ls(d_r, t, k)
            approx = hard_threshold(d_r.conj().T @ t, k)
            time_err = float(np.linalg.norm(d_r @ approx - t))
            coef_err = float(np.linalg.norm(approx - d_r.conj().T @ t))
            max_dev = max(max_dev, obj - time_err**2)  # exact optimum is a lower bound
            max_dev = max(max_dev, time_err - coef_err)  # synthesis is a contraction
    return CheckReport(
        "sparse approximation bounds",
        max_dev <= config.tol_numeric,
        max_dev,
        config.tol_numeric,
    )


def run_all_checks(config: OracleConfig) -> list[CheckReport]:
    """Run every oracle family; the CLI turns failures into a nonzero exit."""
    reports = [
        check_scaled_form(config),
        _check_parseval_dense(config),
        _check_sparse_approximation(config),
    ]
    model_u = make_test_model(n=16)
    reports.append(
        replace(
            check_projection_transposition(make_frame(16, 1), model_u, config),
            name="projection transposition (unitary)",
        )
    )
    model_r = make_test_model(n=8, harmonics=(1, 3), amps=(1.0, 0.5), phases=(0.2, 1.4))
    reports.append(
        replace(
            check_projection_transposition(make_frame(8, 2), model_r, config),
            name="projection transposition (redundant)",
        )
    )
    dev = check_unitary_equivalence(
        make_test_model(n=64), SolverParams(s=2, r=1), n_iters=200
    )
    reports.append(
        CheckReport(
            "unitary variant equivalence", dev <= config.tol_numeric, dev, config.tol_numeric
        )
    )
    return reports
