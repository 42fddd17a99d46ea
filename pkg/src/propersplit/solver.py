"""Iterative solution of ``T X = W`` through a proper splitting, and frames.

Given a proper splitting ``T = U - V`` and a complement ``M`` of the null
space of ``T``, the iteration ``X -> Y X + Z`` with ``Y`` and ``Z`` the
reduced solutions of ``U Y = V`` and ``U Z = W`` for ``M`` converges to the
unique solution of ``T X = W`` whose range lies in ``M``.  The same
machinery yields the closest normalized tight frame of a finite frame by
iterating on the modulus of the synthesis matrix.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOL,
    Tolerances,
    _sv_cutoff,
    as_matrix,
    matrices_equal,
    operator_norm,
    range_projector,
    spectral_radius,
)
from .errors import CriterionFailed, Diverged, NumericalFailure, ShapeMismatch, Stalled
from .geninv import abs_op, douglas_reduced
from .splittings import ProperSplitting, iteration_matrix, projection_splitting

BLOWUP_FACTOR = 1e12
STALL_LOOKBACK = 10


@dataclass(frozen=True)
class IterationReport:
    """Outcome of one iterative run.

    ``residual_history`` holds ``||T X_i - W||`` for every iterate
    including the starting point, so its length is ``iterations + 1``.
    ``final_error`` is the distance to the closed-form reduced solution.
    ``converged`` and ``diverged`` are never both true.
    """

    iterations: int
    residual_history: list[float] = field(repr=False)
    final_error: float | None
    rho: float
    converged: bool
    diverged: bool
    wall_time: float = 0.0


def exact_reduced(t, w, m=None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Closed-form reduced solution of ``T X = W`` for the complement ``m``."""
    return douglas_reduced(t, w, m, tol)


def iterate_reduced(
    t,
    w,
    spl: ProperSplitting,
    m=None,
    x0=None,
    tol: Tolerances = DEFAULT_TOL,
    max_iter: int = 10000,
):
    """Run the splitting iteration until the reduced solution is reached.

    Stops when both the step ``||X_{i+1} - X_i||`` and the residual
    ``||T X - W||`` fall below ``eq_atol`` relative to the iterate and the
    right-hand side.  Raises ``Diverged`` when the iterates blow up past
    ``1e12 (1 + ||Z||)`` or the budget runs out with a non-shrinking
    residual, and ``Stalled`` when the budget runs out while the residual
    is still shrinking.  Returns ``(X, IterationReport)``.
    """
    t, w = as_matrix(t), as_matrix(w)
    if not matrices_equal(t, spl.t, tol):
        raise ShapeMismatch("the splitting does not belong to this matrix")
    if x0 is None:
        x = np.zeros((t.shape[1], w.shape[1]), dtype=complex)
    else:
        x = as_matrix(x0)
        if x.shape != (t.shape[1], w.shape[1]):
            raise ShapeMismatch(
                f"starting point has shape {x.shape}, expected {(t.shape[1], w.shape[1])}"
            )
    y = douglas_reduced(spl.u, spl.v, m, tol)
    z = douglas_reduced(spl.u, w, m, tol)
    rho = spectral_radius(iteration_matrix(spl, tol))
    exact = exact_reduced(t, w, m, tol)

    w_scale = max(1.0, operator_norm(w))
    blowup = BLOWUP_FACTOR * (1.0 + operator_norm(z))
    residuals = [operator_norm(t @ x - w)]
    start = time.perf_counter()
    for i in range(1, max_iter + 1):
        x_next = y @ x + z
        step = operator_norm(x_next - x)
        x = x_next
        residuals.append(operator_norm(t @ x - w))
        if operator_norm(x) > blowup:
            report = IterationReport(
                i, residuals, float(operator_norm(x - exact)), rho, False, True,
                time.perf_counter() - start,
            )
            raise Diverged(f"iterate norm blew up after {i} steps", x, report)
        if step <= tol.eq_atol * max(1.0, operator_norm(x)) and residuals[-1] <= tol.eq_atol * w_scale:
            report = IterationReport(
                i, residuals, float(operator_norm(x - exact)), rho, True, False,
                time.perf_counter() - start,
            )
            return x, report
    elapsed = time.perf_counter() - start
    lookback = residuals[max(0, len(residuals) - 1 - STALL_LOOKBACK)]
    final_error = float(operator_norm(x - exact))
    if residuals[-1] < 0.999 * lookback:
        report = IterationReport(
            max_iter, residuals, final_error, rho, False, False, elapsed
        )
        raise Stalled(f"no convergence within {max_iter} iterations", x, report)
    report = IterationReport(max_iter, residuals, final_error, rho, False, True, elapsed)
    raise Diverged(
        f"residual not shrinking after {max_iter} iterations", x, report
    )


@dataclass(frozen=True)
class FrameSpec:
    """A finite frame for the span of its vectors.

    ``vectors`` is the synthesis matrix: one frame vector per column.
    """

    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vectors", as_matrix(self.vectors))

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def count(self) -> int:
        return self.vectors.shape[1]


def frame_bounds(frame: FrameSpec, tol: Tolerances = DEFAULT_TOL):
    """Optimal frame bounds on the span: squared extreme singular values."""
    s = np.linalg.svd(frame.vectors, compute_uv=False)
    r = int(np.count_nonzero(s > _sv_cutoff(s, frame.vectors.shape, tol)))
    if r == 0:
        return 0.0, 0.0
    return float(s[r - 1] ** 2), float(s[0] ** 2)


def frame_symmetric_approx(
    frame: FrameSpec, tol: Tolerances = DEFAULT_TOL, max_iter: int = 10000
):
    """Iterate towards the closest normalized tight frame.

    Runs ``X -> (P_F* - |F|) X + F*`` which converges to the adjoint of
    the polar isometry of the synthesis matrix; the columns of ``X*`` are
    the tight frame vectors.  Requires ``||P_F* - |F||| < 1``, otherwise
    ``CriterionFailed`` is raised.  Returns ``(X, IterationReport)``.
    """
    f = frame.vectors
    modulus = abs_op(f, tol)
    p_rows = range_projector(f.conj().T, tol)
    crit = operator_norm(p_rows - modulus)
    if crit >= 1.0 - tol.rho_margin:
        raise CriterionFailed(
            f"||P - |F||| = {crit:.6g} does not certify convergence"
        )
    spl = projection_splitting(modulus, tol)
    x, report = iterate_reduced(modulus, f.conj().T, spl, tol=tol, max_iter=max_iter)
    tightness = operator_norm(x.conj().T @ x - range_projector(f, tol))
    if tightness > 1e-6:
        raise NumericalFailure(
            f"limit is not a normalized tight frame (defect {tightness:.3g})"
        )
    return x, report
