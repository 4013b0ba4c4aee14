"""Declipping solvers: hard thresholding plus three ADMM-derived iterations.

All three variants alternate a k-sparse hard-thresholding step with a
projection onto the clipping-consistent set, accumulate the constraint
residual in a scaled dual variable, and grow the sparsity target k by s
every r iterations until the residual drops below epsilon.

* ASPADE: analysis formulation; iterates a time-domain estimate, the dual
  variable lives in the coefficient domain.
* SSPADE_ORIG: synthesis formulation with the constraint carried on the
  coefficients themselves; iterates coefficients, dual in the coefficient
  domain. (Solves a synthesis problem whose sparsity constraint binds the
  coefficient estimate directly rather than the synthesized signal.)
* SSPADE_DR: synthesis formulation consistent with the analysis one; the
  sparse step is approximated by thresholding analysis coefficients, dual
  is a real time-domain vector.

The penalty parameter of the underlying augmented Lagrangian scales both
indicator-constrained subproblems without moving their minimizers, so it
never appears here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .feasible import ClipModel, project_gamma, project_gamma_coef
from .frames import FrameOperator

__all__ = [
    "Variant",
    "SolverParams",
    "SolverState",
    "SolveResult",
    "hard_threshold",
    "init_state",
    "aspade_step",
    "sspade_orig_step",
    "sspade_dr_step",
    "step",
    "run_solver",
]


class Variant(Enum):
    ASPADE = "aspade"
    SSPADE_ORIG = "sspade"
    SSPADE_DR = "sspade-dr"


@dataclass(frozen=True)
class SolverParams:
    """Sparsity schedule and termination settings.

    k starts at `s` and grows by `s` every `r` iterations; the solve stops
    once the residual is <= `epsilon` or k exceeds `max_k` (default: the
    coefficient count).
    """

    s: int = 1
    r: int = 1
    epsilon: float = 0.1
    max_k: int | None = None
    variant: Variant = Variant.ASPADE

    def __post_init__(self):
        if self.s < 1:
            raise ValueError(f"s must be >= 1, got {self.s}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.max_k is not None and self.max_k < 1:
            raise ValueError(f"max_k must be >= 1, got {self.max_k}")


@dataclass(frozen=True)
class SolverState:
    """One iteration's variables. `i` counts completed iterations."""

    x_hat: np.ndarray
    z_bar: np.ndarray
    u: np.ndarray
    k: int
    i: int = 0
    residual: float = np.inf
    z_hat: np.ndarray | None = None  # SSPADE_ORIG primal coefficients


@dataclass(frozen=True)
class SolveResult:
    x_restored: np.ndarray
    iterations: int
    final_residual: float
    final_k: int
    converged: bool


def hard_threshold(s_vec: np.ndarray, k: int) -> np.ndarray:
    """Keep the k largest-magnitude entries of s_vec, zero the rest.

    Exact minimizer of ||z - s_vec||^2 over k-sparse z. Ties are broken by
    keeping the lower index.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    s_vec = np.asarray(s_vec)
    if k >= len(s_vec):
        return s_vec.copy()
    out = np.zeros_like(s_vec)
    if k == 0:
        return out
    # stable sort on -|s| keeps lower indices first among equal magnitudes
    keep = np.argsort(-np.abs(s_vec), kind="stable")[:k]
    out[keep] = s_vec[keep]
    return out


def init_state(model: ClipModel, op: FrameOperator, params: SolverParams) -> SolverState:
    """Starting state: estimate pinned to the observation, zero dual, k = s."""
    p = op.coeff_len
    if params.variant is Variant.SSPADE_ORIG:
        z0 = op.analyze(model.y)
        return SolverState(
            x_hat=model.y.copy(),
            z_hat=z0,
            z_bar=np.zeros(p, dtype=complex),
            u=np.zeros(p, dtype=complex),
            k=params.s,
        )
    if params.variant is Variant.SSPADE_DR:
        u = np.zeros(op.signal_len)
    else:
        u = np.zeros(p, dtype=complex)
    return SolverState(
        x_hat=model.y.copy(),
        z_bar=np.zeros(p, dtype=complex),
        u=u,
        k=params.s,
    )


def _advance(state: SolverState, params: SolverParams, u_new, residual, **kw) -> SolverState:
    """Apply the shared dual/counter/sparsity bookkeeping after a step."""
    if residual <= params.epsilon:
        return replace(state, residual=residual, **kw)
    i = state.i + 1
    k = state.k + params.s if i % params.r == 0 else state.k
    return replace(state, u=u_new, residual=residual, i=i, k=k, **kw)


def aspade_step(
    state: SolverState, model: ClipModel, op: FrameOperator, params: SolverParams
) -> SolverState:
    """One analysis-variant iteration: threshold, project, dual update."""
    z_bar = hard_threshold(op.analyze(state.x_hat) + state.u, state.k)
    x_hat = project_gamma(op.synthesize(z_bar - state.u), model)
    ax = op.analyze(x_hat)
    residual = float(np.linalg.norm(ax - z_bar))
    return _advance(
        state, params, state.u + ax - z_bar, residual, x_hat=x_hat, z_bar=z_bar
    )


def sspade_orig_step(
    state: SolverState, model: ClipModel, op: FrameOperator, params: SolverParams
) -> SolverState:
    """One original-synthesis iteration; the primal variable is z_hat."""
    z_bar = hard_threshold(state.z_hat + state.u, state.k)
    z_hat = project_gamma_coef(z_bar - state.u, model, op)
    residual = float(np.linalg.norm(z_hat - z_bar))
    return _advance(
        state,
        params,
        state.u + z_hat - z_bar,
        residual,
        z_hat=z_hat,
        x_hat=op.synthesize(z_hat),
        z_bar=z_bar,
    )


def sspade_dr_step(
    state: SolverState, model: ClipModel, op: FrameOperator, params: SolverParams
) -> SolverState:
    """One corrected-synthesis iteration; the dual lives in the time domain."""
    z_bar = hard_threshold(op.analyze(state.x_hat - state.u), state.k)
    dz = op.synthesize(z_bar)
    x_hat = project_gamma(dz + state.u, model)
    residual = float(np.linalg.norm(dz - x_hat))
    return _advance(
        state, params, state.u + dz - x_hat, residual, x_hat=x_hat, z_bar=z_bar
    )


_STEPS = {
    Variant.ASPADE: aspade_step,
    Variant.SSPADE_ORIG: sspade_orig_step,
    Variant.SSPADE_DR: sspade_dr_step,
}


def step(
    state: SolverState, model: ClipModel, op: FrameOperator, params: SolverParams
) -> SolverState:
    """Advance one iteration of the variant selected in params."""
    return _STEPS[params.variant](state, model, op, params)


def run_solver(
    model: ClipModel, op: FrameOperator, params: SolverParams
) -> SolveResult:
    """Iterate the selected variant until the residual meets epsilon or k
    exceeds max_k.

    Non-convergence is not an error: the lowest-residual iterate seen is
    returned with converged=False. The restored signal is always
    clipping-consistent (projected once more on exit for the
    coefficient-domain variant, whose synthesis is consistent only up to
    rounding).
    """
    max_k = params.max_k if params.max_k is not None else op.coeff_len
    state = init_state(model, op, params)
    step_fn = _STEPS[params.variant]
    best_x = model.y.copy()
    best_residual = np.inf
    best_k = state.k
    iterations = 0
    while True:
        state = step_fn(state, model, op, params)
        iterations += 1
        if state.residual < best_residual:
            best_x = state.x_hat
            best_residual = state.residual
            best_k = state.k
        if state.residual <= params.epsilon:
            converged = True
            break
        if state.k > max_k:
            converged = False
            break
    if params.variant is Variant.SSPADE_ORIG:
        best_x = project_gamma(best_x, model)
    return SolveResult(
        x_restored=best_x,
        iterations=iterations,
        final_residual=best_residual,
        final_k=best_k,
        converged=converged,
    )
