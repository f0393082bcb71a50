"""Generic proximal-gradient machinery.

Solves composite objectives f(x) = g(x) + lam * h(x) where g is smooth and
h has a cheap proximal operator. Two update rules are provided:

  ista:   x+ = prox_h(x - s * grad_g(x), lam * s)
  fista:  momentum extrapolation y, then the same prox step at y, with the
          scalar recurrence t+ = (1 + sqrt(1 + 4 t^2)) / 2

An optional per-pass renormalization projects iterates onto the unit sphere,
which turns the sparse-PCA instance (g(x) = -x^T D^T D x, h = l1) into a
thresholded power iteration; without it that objective is unbounded below.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import DivergenceError, InvalidInputError, NumericError


def soft_threshold(v: np.ndarray, tau: float) -> np.ndarray:
    """Componentwise shrinkage sign(v) * max(|v| - tau, 0).

    This is the proximal operator of tau * ||.||_1.
    """
    if tau < 0:
        raise InvalidInputError(f"threshold must be >= 0, got {tau}")
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


@dataclass
class ProxProblem:
    """Composite objective: smooth gradient oracle plus prox oracle for lam * h.

    ``prox_h(v, tau)`` must return the prox of tau * h at v and satisfy
    ``prox_h(v, 0) == v``. ``objective``, when given, enables per-iterate
    objective recording in the solver trace (costs one extra evaluation per
    pass, so leave it out of timing-sensitive fits).
    """

    dim: int
    grad_g: Callable[[np.ndarray], np.ndarray]
    prox_h: Callable[[np.ndarray, float], np.ndarray]
    lam: float = 0.0
    objective: Callable[[np.ndarray], float] | None = None


@dataclass
class SolverConfig:
    """Iteration parameters shared by both methods.

    ``step`` may be the string ``"auto"`` only where a caller can resolve it
    from a data matrix (see :func:`estimate_step`); :func:`solve` itself
    requires a numeric step. ``normalize`` defaults to the sparse-PCA setting
    and should be turned off for convex problems.
    """

    step: float | str = "auto"
    tol: float = 1e-6
    max_iter: int = 1000
    seed: int = 0
    normalize: bool = True

    def validate(self) -> None:
        if isinstance(self.step, str):
            if self.step != "auto":
                raise InvalidInputError(f"step must be a positive number or 'auto', got {self.step!r}")
        elif self.step <= 0:
            raise InvalidInputError(f"step must be > 0, got {self.step}")
        if not self.tol > 0:
            raise InvalidInputError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise InvalidInputError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class FistaState:
    """The (x_old, x_old_old, t_old, t_old_old) quadruple plus the step size.

    Both scalars start at 1 so the first momentum coefficient
    (t_old_old - 1) / t_old is zero; after each pass the previous values are
    shifted into the *_old_old slots before the new ones are written.
    """

    x_old: np.ndarray
    x_old_old: np.ndarray
    t_old: float = 1.0
    t_old_old: float = 1.0
    step: float = 1.0


def initial_fista_state(x0: np.ndarray, step: float) -> FistaState:
    x0 = np.asarray(x0, dtype=float)
    return FistaState(x_old=x0.copy(), x_old_old=x0.copy(), t_old=1.0, t_old_old=1.0, step=step)


@dataclass
class SolverTrace:
    iterations: int
    displacement: float
    wall_seconds: float
    converged: bool
    converged_to_zero: bool = False
    objective_history: list[float] | None = None


def _check_vector(problem: ProxProblem, x: np.ndarray, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.dim,):
        raise InvalidInputError(f"{name} must have shape ({problem.dim},), got {x.shape}")
    return x


def _gradient(problem: ProxProblem, x: np.ndarray) -> np.ndarray:
    grad = np.asarray(problem.grad_g(x), dtype=float)
    if grad.shape != x.shape:
        raise InvalidInputError(f"gradient has shape {grad.shape}, expected {x.shape}")
    if not np.isfinite(grad).all():
        bad = int(np.flatnonzero(~np.isfinite(grad))[0])
        raise NumericError(f"non-finite gradient at component {bad}")
    return grad


def ista_pass(problem: ProxProblem, x: np.ndarray, step: float) -> np.ndarray:
    """One proximal-gradient step: prox_h(x - step * grad_g(x), lam * step)."""
    if step <= 0:
        raise InvalidInputError(f"step must be > 0, got {step}")
    x = _check_vector(problem, x)
    grad = _gradient(problem, x)
    return np.asarray(problem.prox_h(x - step * grad, problem.lam * step), dtype=float)


def fista_pass(
    problem: ProxProblem, state: FistaState, lam: float | None = None
) -> tuple[np.ndarray, FistaState]:
    """One accelerated step from ``state``; returns the new iterate and state.

    The momentum point is y = x_old + ((t_old_old - 1) / t_old) (x_old - x_old_old),
    the prox step is taken at y, and the scalar recurrence advances t. With
    t_old_old == t_old == 1 the momentum vanishes and the pass coincides with
    :func:`ista_pass` from x_old.
    """
    lam = problem.lam if lam is None else lam
    if lam < 0:
        raise InvalidInputError(f"lam must be >= 0, got {lam}")
    if state.step <= 0:
        raise InvalidInputError(f"state.step must be > 0, got {state.step}")
    x_old = _check_vector(problem, state.x_old, "state.x_old")
    x_old_old = _check_vector(problem, state.x_old_old, "state.x_old_old")
    momentum = (state.t_old_old - 1.0) / state.t_old
    y = x_old + momentum * (x_old - x_old_old)
    grad = _gradient(problem, y)
    x_new = np.asarray(problem.prox_h(y - state.step * grad, lam * state.step), dtype=float)
    t_new = (1.0 + math.sqrt(1.0 + 4.0 * state.t_old**2)) / 2.0
    new_state = FistaState(
        x_old=x_new,
        x_old_old=x_old,
        t_old=t_new,
        t_old_old=state.t_old,
        step=state.step,
    )
    return x_new, new_state


def orient_sign(x: np.ndarray) -> np.ndarray:
    """Flip so the largest-magnitude entry is positive (eigenvector sign fix)."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x
    i = int(np.argmax(np.abs(x)))
    return -x if x[i] < 0 else x


def solve(
    problem: ProxProblem,
    config: SolverConfig,
    method: str,
    x0: np.ndarray,
) -> tuple[np.ndarray, SolverTrace]:
    """Iterate ista/fista passes until the displacement drops below tol.

    Convergence means ||x_{k+1} - x_k||_2 <= tol. With ``config.normalize``
    every nonzero iterate is rescaled to the unit sphere before that test; a
    zero iterate stops the run and is flagged ``converged_to_zero`` in the
    trace. Normalized runs are sign-ambiguous (x and -x are the same
    solution), so their result is sign-fixed via :func:`orient_sign`;
    unnormalized (convex) runs are returned as computed.
    """
    config.validate()
    if method not in ("ista", "fista"):
        raise InvalidInputError(f"method must be 'ista' or 'fista', got {method!r}")
    if isinstance(config.step, str):
        raise InvalidInputError("solve needs a numeric step; resolve 'auto' via estimate_step")
    step = float(config.step)
    x = _check_vector(problem, x0, "x0").copy()
    if config.normalize:
        nrm = float(np.linalg.norm(x))
        if nrm > 0:
            x = x / nrm
    state = initial_fista_state(x, step) if method == "fista" else None
    history: list[float] | None = None
    if problem.objective is not None:
        history = [float(problem.objective(x))]

    start = time.perf_counter()
    iterations = 0
    displacement = math.inf
    hit_zero = False
    for k in range(1, config.max_iter + 1):
        # non-finite iterates are detected below and reported as a typed
        # error, so numpy's overflow warnings would only duplicate that
        with np.errstate(over="ignore", invalid="ignore"):
            if method == "ista":
                x_new = ista_pass(problem, x, step)
            else:
                x_new, state = fista_pass(problem, state)
        if not np.isfinite(x_new).all():
            raise DivergenceError(f"iterate became non-finite at iteration {k}", iteration=k)
        if config.normalize:
            nrm = float(np.linalg.norm(x_new))
            if nrm > 0.0:
                x_new = x_new / nrm
            else:
                hit_zero = True
            if method == "fista":
                state = replace(state, x_old=x_new)
        displacement = float(np.linalg.norm(x_new - x))
        x = x_new
        iterations = k
        if history is not None:
            history.append(float(problem.objective(x)))
        if hit_zero or displacement <= config.tol:
            break
    wall = time.perf_counter() - start

    trace = SolverTrace(
        iterations=iterations,
        displacement=displacement,
        wall_seconds=wall,
        converged=displacement <= config.tol,
        converged_to_zero=hit_zero,
        objective_history=history,
    )
    if config.normalize:
        x = orient_sign(x)
    return x, trace


def estimate_step(D: np.ndarray, iters: int = 100) -> float:
    """Step size 1 / (2 * lambda_max(D^T D)) from power iteration on D^T D.

    Runs ``iters`` power steps from a fixed deterministic start (falling back
    to a second fixed start if the first lies in the null space). A zero
    spectral estimate returns the 1e-12 clamp value and emits a warning.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.size == 0:
        raise InvalidInputError(f"D must be a non-empty 2-D matrix, got shape {D.shape}")
    if iters < 1:
        raise InvalidInputError(f"iters must be >= 1, got {iters}")
    p = D.shape[1]
    starts = [np.ones(p) / math.sqrt(p), np.random.default_rng(0).standard_normal(p)]
    lam_max = 0.0
    for v in starts:
        dead = False
        for _ in range(iters):
            w = D.T @ (D @ v)
            nrm = float(np.linalg.norm(w))
            if nrm == 0.0:
                dead = True
                break
            v = w / nrm
        if not dead:
            lam_max = float(np.dot(D @ v, D @ v) / np.dot(v, v))
            break
    if lam_max <= 0.0:
        warnings.warn("spectral estimate is zero; returning clamp value 1e-12", stacklevel=2)
        return 1e-12
    return max(1.0 / (2.0 * lam_max), 1e-12)


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw on the unit sphere (Gaussian direction, normalized)."""
    if dim < 1:
        raise InvalidInputError(f"dim must be >= 1, got {dim}")
    while True:
        v = rng.standard_normal(dim)
        nrm = float(np.linalg.norm(v))
        if nrm > 0:
            return v / nrm


def lasso_problem(A: np.ndarray, b: np.ndarray, lam: float) -> ProxProblem:
    """The l1-regularized least squares instance g = 0.5 ||Ax - b||^2, h = l1."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise InvalidInputError(f"incompatible shapes A {A.shape}, b {b.shape}")
    if lam < 0:
        raise InvalidInputError(f"lam must be >= 0, got {lam}")
    AtA = A.T @ A
    Atb = A.T @ b

    def grad(x: np.ndarray) -> np.ndarray:
        return AtA @ x - Atb

    def objective(x: np.ndarray) -> float:
        r = A @ x - b
        return 0.5 * float(r @ r) + lam * float(np.abs(x).sum())

    return ProxProblem(dim=A.shape[1], grad_g=grad, prox_h=soft_threshold, lam=lam, objective=objective)
