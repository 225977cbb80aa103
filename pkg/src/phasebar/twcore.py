"""Traveling-wave least squares: minimize the integrated squared residual of a
profile equation over nodal unknowns plus scalar constants.

A problem supplies a residual map from the unknown vector (one or more nodal
profiles concatenated with scalar unknowns such as an integration constant)
to nodal residuals on the interior, together with its analytic sparse
Jacobian.  The profile equations downstream are piecewise linear or smooth
in the unknowns, so a damped Gauss-Newton iteration with the branch pattern
re-detected after every step converges in a handful of steps; Levenberg
regularization covers the rank deficiency that comes from minimizing over
all nodal values while integrating the residual only over the interior.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grid import Grid1D

logger = logging.getLogger(__name__)

ResidualFn = Callable[[np.ndarray], tuple[np.ndarray, sp.spmatrix]]


class NotConverged(RuntimeError):
    """Residual target not reached; carries the best-so-far solution."""

    def __init__(self, message: str, solution: "TWSolution"):
        super().__init__(message)
        self.solution = solution


class SingularNormalEquations(RuntimeError):
    """Normal equations stayed rank-deficient even after regularization."""


@dataclass
class TWProblem:
    """One traveling-wave solve: unknown layout, residual evaluator, constraints.

    ``residual`` maps the full unknown vector to (r, J) where r holds the
    residual at each interior node (stacked per equation for multi-field
    problems) and J is its sparse Jacobian.  ``zero_mean_profiles`` lists
    profile indices whose nodal mean is pinned to zero at every iterate.
    """

    grid: Grid1D
    m2: float
    residual: ResidualFn
    n_profiles: int = 1
    n_scalars: int = 1
    interior: np.ndarray = None  # type: ignore[assignment]
    zero_mean_profiles: Sequence[int] = ()
    c1_over_c2: float = np.inf
    name: str = "tw"

    def __post_init__(self) -> None:
        if self.interior is None:
            self.interior = np.arange(1, self.grid.n_nodes - 1)
        self.interior = np.asarray(self.interior, dtype=int)
        if self.interior.size == 0:
            raise ValueError("interior mask is empty")
        if self.interior.min() < 1 or self.interior.max() > self.grid.n_nodes - 2:
            raise ValueError("interior mask must be strictly inside the domain")
        if abs(self.m2) >= self.c1_over_c2:
            raise ValueError(
                f"|M2|={abs(self.m2)} is not below the sonic-ratio bound {self.c1_over_c2}"
            )

    @property
    def n_unknowns(self) -> int:
        return self.n_profiles * self.grid.n_nodes + self.n_scalars

    def split(self, x: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        """Unpack the unknown vector into per-profile arrays and the scalar block."""
        n = self.grid.n_nodes
        profiles = [x[k * n : (k + 1) * n] for k in range(self.n_profiles)]
        return profiles, x[self.n_profiles * n :]


@dataclass
class TWSolution:
    profiles: list[np.ndarray]
    scalars: np.ndarray
    r_final: float
    n_iter: int
    converged: bool
    r_history: list[float] = field(default_factory=list)
    m2: float = 0.0
    interior: np.ndarray | None = None
    grid: Grid1D | None = None

    @property
    def x(self) -> np.ndarray:
        return np.concatenate([*self.profiles, self.scalars])


def _project_zero_mean(problem: TWProblem, step: np.ndarray) -> np.ndarray:
    n = problem.grid.n_nodes
    for k in problem.zero_mean_profiles:
        block = step[k * n : (k + 1) * n]
        block -= block.mean()
    return step


def minimize_R(
    problem: TWProblem,
    initial_guess: np.ndarray,
    tol_R: float | None = None,
    max_iter: int = 80,
    raise_on_fail: bool = True,
) -> TWSolution:
    """Damped Gauss-Newton minimization of R = dx * sum(r^2).

    Accepted steps never increase R (backtracking line search); linear
    zero-mean constraints hold exactly at every iterate.  Returns once
    R <= tol_R (default 1e-8 * L), otherwise raises ``NotConverged``
    carrying the best iterate (or returns it when ``raise_on_fail`` is
    False).
    """
    dx = problem.grid.dx
    if tol_R is None:
        tol_R = 1e-8 * problem.grid.L

    x = np.asarray(initial_guess, dtype=float).copy()
    if x.shape != (problem.n_unknowns,):
        raise ValueError(
            f"initial guess has {x.shape}, expected ({problem.n_unknowns},)"
        )
    x = _project_zero_mean(problem, x)

    r, J = problem.residual(x)
    R = dx * float(r @ r)
    history = [R]
    lam = 1e-12
    n_iter = 0

    for n_iter in range(1, max_iter + 1):
        if R <= tol_R:
            break
        J = J.tocsr()
        g = J.T @ r
        JtJ = (J.T @ J).tocsc()
        diag_scale = max(JtJ.diagonal().max(), 1e-30)

        step = None
        while lam < 1e8:
            A = JtJ + sp.identity(JtJ.shape[0], format="csc") * (lam * diag_scale)
            try:
                cand = spla.spsolve(A, -g)
            except RuntimeError:
                cand = None
            if cand is not None and np.all(np.isfinite(cand)):
                step = cand
                break
            lam *= 100.0
        if step is None:
            raise SingularNormalEquations(
                f"{problem.name}: normal equations singular at lambda={lam:.1e}"
            )
        step = _project_zero_mean(problem, step)

        # Backtracking: accept the first damping factor that lowers R.
        alpha, accepted = 1.0, False
        for _ in range(40):
            x_new = x + alpha * step
            r_new, J_new = problem.residual(x_new)
            R_new = dx * float(r_new @ r_new)
            if np.isfinite(R_new) and R_new < R:
                x, r, J, R = x_new, r_new, J_new, R_new
                accepted = True
                break
            alpha *= 0.5
        history.append(R)
        logger.debug(
            "%s iter=%d R=%.6e step=%.3e alpha=%.3e lam=%.1e",
            problem.name, n_iter, R, float(np.linalg.norm(step)), alpha, lam,
        )
        if accepted:
            lam = max(lam * 0.1, 1e-12)
        else:
            lam *= 100.0
            if lam >= 1e8:
                break

    profiles, scalars = problem.split(x)
    sol = TWSolution(
        profiles=[p.copy() for p in profiles],
        scalars=scalars.copy(),
        r_final=R,
        n_iter=n_iter,
        converged=R <= tol_R,
        r_history=history,
        m2=problem.m2,
        interior=problem.interior,
        grid=problem.grid,
    )
    if not sol.converged and raise_on_fail:
        raise NotConverged(
            f"{problem.name}: R={R:.3e} > tol={tol_R:.3e} after {n_iter} iterations",
            sol,
        )
    return sol


def plateau_values(
    solution: TWSolution,
    window_fraction: float = 0.1,
    profile_index: int = 0,
) -> tuple[float, float, float, float]:
    """Far-field plateau means of a profile, with standard deviations.

    Averages over the leftmost / rightmost ``window_fraction`` of the
    interior nodes; the standard deviations diagnose plateau flatness.
    Returns (left_mean, right_mean, left_std, right_std).
    """
    if not 0.0 < window_fraction <= 0.25:
        raise ValueError(f"window_fraction must be in (0, 0.25], got {window_fraction}")
    if solution.interior is None:
        raise ValueError("solution does not carry an interior mask")
    vals = solution.profiles[profile_index][solution.interior]
    w = max(2, int(round(window_fraction * vals.size)))
    left, right = vals[:w], vals[-w:]
    return (
        float(left.mean()),
        float(right.mean()),
        float(left.std()),
        float(right.std()),
    )


def tanh_step(
    x: np.ndarray, left: float, right: float, center: float, width: float
) -> np.ndarray:
    """Smooth step from ``left`` to ``right`` used to seed profiles."""
    return left + (right - left) * 0.5 * (1.0 + np.tanh((x - center) / width))
