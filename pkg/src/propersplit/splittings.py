"""Proper splittings: construction, convergence verdicts and diagnostics.

A proper splitting of ``T`` is a decomposition ``T = U - V`` in which ``U``
has the same range and the same null space as ``T``.  The induced iteration
``X -> U^+ V X + U^+ W`` converges for every starting point exactly when
the spectral radius of ``U^+ V`` is below one.  Several named choices of
``U`` admit closed-form norm criteria for that verdict; ``convergence``
evaluates both routes and reports them side by side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    is_hermitian,
    is_psd,
    matrices_equal,
    numerical_rank,
    operator_norm,
    range_projector,
    smallest_positive_sv,
    spectral_radius,
    subspaces_equal,
)
from .errors import (
    NonSquare,
    NotHermitian,
    NotInPLh,
    NotInvertible,
    NotPSD,
    NotProper,
    NotUnitary,
    ShapeMismatch,
    SingularIteration,
)
from .geninv import canonical_oblique, group_inverse, moore_penrose, polar

KINDS = (
    "polar",
    "Q",
    "group",
    "MP",
    "projection",
    "PLh",
    "induced_right",
    "induced_conj",
    "induced_invertible",
    "custom",
)


@dataclass(frozen=True)
class ProperSplitting:
    """A validated proper splitting ``t = u - v`` with a construction tag."""

    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    kind: str = "custom"


@dataclass(frozen=True)
class ConvergenceReport:
    """Spectral-radius verdict plus, when available, the closed-form route.

    ``converges`` means ``rho < 1 - rho_margin``; ``boundary`` flags a rho
    within the margin of one.  ``fast_converges`` is the verdict of the
    norm criterion named by ``fast_path`` and must agree with ``converges``
    whenever it is reported.
    """

    rho: float
    converges: bool
    boundary: bool
    fast_path: str | None = None
    criterion_value: float | None = None
    fast_converges: bool | None = None


@dataclass(frozen=True)
class PositivityDiagnostics:
    """Six equivalent positivity statements about a splitting.

    For any proper splitting these are all true or all false together:
    positivity of ``T^+ V``, positivity of ``U^+ V``, domination
    ``0 <= U^+ V <= P_V*``, domination ``0 <= U^+ T <= P_T*``, existence
    of a positive solution of ``U X = V``, and the quadratic bound on the
    Hermitian defect ``P_T* - U^+ T``.
    """

    t_pinv_v_psd: bool
    u_pinv_v_psd: bool
    u_pinv_v_dominated: bool
    u_pinv_t_dominated: bool
    positive_solution: bool
    quadratic_bound: bool

    def as_tuple(self):
        return (
            self.t_pinv_v_psd,
            self.u_pinv_v_psd,
            self.u_pinv_v_dominated,
            self.u_pinv_t_dominated,
            self.positive_solution,
            self.quadratic_bound,
        )

    @property
    def all_agree(self) -> bool:
        vals = self.as_tuple()
        return all(vals) or not any(vals)


@dataclass(frozen=True)
class IdentityChecks:
    """Exactness checks tying a splitting back to the original matrix.

    ``compression``: ``(U^+ T)^+ = T^+ U``.
    ``nullspaces``: ``N(U^+ V) = N(V)``.
    ``inverse_formula``: ``T^+ = (I - U^+ V)^(-1) U^+``.
    """

    compression: bool
    nullspaces: bool
    inverse_formula: bool

    @property
    def all_hold(self) -> bool:
        return self.compression and self.nullspaces and self.inverse_formula


@dataclass(frozen=True)
class ComparisonReport:
    rho_a: float
    rho_b: float
    faster: str  # "a", "b" or "tie"


def make_splitting(
    t, u, tol: Tolerances = DEFAULT_TOL, kind: str = "custom"
) -> ProperSplitting:
    """Validate ``(t, u)`` as a proper splitting and return it.

    ``u`` must share both the range and the null space of ``t``; otherwise
    ``NotProper`` is raised.
    """
    t, u = as_matrix(t), as_matrix(u)
    if t.shape != u.shape:
        raise ShapeMismatch(f"t has shape {t.shape} but u has shape {u.shape}")
    if kind not in KINDS:
        raise ValueError(f"unknown splitting kind {kind!r}")
    if not subspaces_equal(u, t, tol):
        raise NotProper("ranges of U and T differ")
    if not subspaces_equal(u.conj().T, t.conj().T, tol):
        raise NotProper("null spaces of U and T differ")
    return ProperSplitting(t, u, u - t, kind)


def polar_splitting(t, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting with ``U`` the polar partial isometry of ``T``."""
    t = as_matrix(t)
    return make_splitting(t, polar(t, tol).isometry, tol, kind="polar")


def q_splitting(t, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting with ``U`` the canonical idempotent onto R(T) along N(T)."""
    t = as_matrix(t)
    return make_splitting(t, canonical_oblique(t, tol), tol, kind="Q")


def group_splitting(t, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting with ``U`` the group inverse of ``T``."""
    t = as_matrix(t)
    return make_splitting(t, group_inverse(t, tol), tol, kind="group")


def mp_splitting(t, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting of a Hermitian ``T`` with ``U`` its Moore-Penrose inverse."""
    t = as_matrix(t)
    if not is_hermitian(t, tol):
        raise NotHermitian("MP splitting is defined for Hermitian matrices")
    return make_splitting(t, moore_penrose(t, tol), tol, kind="MP")


def projection_splitting(t, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting of a Hermitian ``T`` with ``U`` its range projector."""
    t = as_matrix(t)
    if not is_hermitian(t, tol):
        raise NotHermitian("projection splitting is defined for Hermitian matrices")
    return make_splitting(t, range_projector(t, tol), tol, kind="projection")


def plh_splitting(s, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting of a projection-times-Hermitian product.

    For ``S`` factoring as ``P_S T`` with ``T`` Hermitian sharing the null
    space of ``S``, the splitting takes ``U = P_S P_S*``.  The Hermitian
    factor is reconstructed as ``(S + S* - P_S S*) Q`` with ``Q`` the
    canonical idempotent of ``S``; if that reconstruction is not Hermitian
    the matrix does not belong to the class and ``NotInPLh`` is raised.
    """
    s = as_matrix(s)
    if s.shape[0] != s.shape[1]:
        raise NonSquare("the projection times Hermitian class is square")
    q = canonical_oblique(s, tol)
    p_range = range_projector(s, tol)
    factor = (s + s.conj().T - p_range @ s.conj().T) @ q
    if not is_hermitian(factor, tol):
        raise NotInPLh("reconstructed Hermitian factor is not Hermitian")
    if not matrices_equal(p_range @ factor, s, tol):
        raise NotInPLh("reconstructed factor does not reproduce S")
    p_rows = range_projector(s.conj().T, tol)
    return make_splitting(s, p_range @ p_rows, tol, kind="PLh")


def induced_right(
    spl: ProperSplitting, w, tol: Tolerances = DEFAULT_TOL
) -> ProperSplitting:
    """Splitting of ``T W`` obtained by right-multiplying by a unitary."""
    w = as_matrix(w)
    if w.shape[0] != w.shape[1] or w.shape[0] != spl.t.shape[1]:
        raise ShapeMismatch("unitary factor has incompatible shape")
    if operator_norm(w.conj().T @ w - np.eye(w.shape[0])) > tol.eq_atol:
        raise NotUnitary("right factor is not unitary")
    return make_splitting(spl.t @ w, spl.u @ w, tol, kind="induced_right")


def induced_conj(
    spl: ProperSplitting, w, tol: Tolerances = DEFAULT_TOL
) -> ProperSplitting:
    """Splitting of ``W T W*`` obtained by unitary conjugation."""
    w = as_matrix(w)
    if spl.t.shape[0] != spl.t.shape[1]:
        raise NonSquare("conjugation needs a square matrix")
    if w.shape[0] != w.shape[1] or w.shape[0] != spl.t.shape[0]:
        raise ShapeMismatch("unitary factor has incompatible shape")
    if operator_norm(w.conj().T @ w - np.eye(w.shape[0])) > tol.eq_atol:
        raise NotUnitary("conjugating factor is not unitary")
    wc = w.conj().T
    return make_splitting(w @ spl.t @ wc, w @ spl.u @ wc, tol, kind="induced_conj")


def induced_invertible(t, g, tol: Tolerances = DEFAULT_TOL) -> ProperSplitting:
    """Splitting of ``T G`` induced by the projection splitting of Hermitian T.

    ``g`` must be invertible; the splitting of the product keeps the parts
    ``P_T G`` and ``(P_T - T) G``.
    """
    t, g = as_matrix(t), as_matrix(g)
    if not is_hermitian(t, tol):
        raise NotHermitian("the left factor must be Hermitian")
    if g.shape[0] != g.shape[1] or g.shape[0] != t.shape[1]:
        raise ShapeMismatch("right factor has incompatible shape")
    sg = np.linalg.svd(g, compute_uv=False)
    if sg[-1] == 0.0 or sg[0] / sg[-1] > tol.cond_guard:
        raise NotInvertible("right factor is numerically singular")
    p = range_projector(t, tol)
    return make_splitting(t @ g, p @ g, tol, kind="induced_invertible")


def iteration_matrix(spl: ProperSplitting, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The iteration matrix ``U^+ V``."""
    return moore_penrose(spl.u, tol) @ spl.v


def _fast_path(spl: ProperSplitting, tol: Tolerances):
    """Closed-form criterion for the named kinds, or None.

    Returns ``(tag, criterion_value, verdict)``.  For the polar kind the
    reported criterion is the norm of ``T`` while the verdict uses the
    exact identity ``rho = max(1 - sigma_min+, ||T|| - 1)`` so that the
    margin semantics match the spectral-radius verdict.  For the Q and
    group kinds the criterion is only an equivalence when the compression
    ``P_T* T`` (respectively ``P_T* T^2``) is Hermitian; otherwise the
    fast path is withheld.
    """
    t = spl.t
    margin = 1.0 - tol.rho_margin
    if spl.kind == "polar":
        norm_t = operator_norm(t)
        if numerical_rank(t, tol) == 0:
            return "polar_norm", norm_t, True
        rho_closed = max(1.0 - smallest_positive_sv(t, tol), norm_t - 1.0)
        return "polar_norm", norm_t, rho_closed < margin
    if spl.kind == "Q":
        p_rows = range_projector(t.conj().T, tol)
        if not is_hermitian(p_rows @ t, tol):
            return None
        crit = operator_norm(p_rows @ (np.eye(t.shape[0]) - t))
        return "q_norm", crit, crit < margin
    if spl.kind == "group":
        p_rows = range_projector(t.conj().T, tol)
        t2 = t @ t
        if not is_hermitian(p_rows @ t2, tol):
            return None
        crit = operator_norm(p_rows @ (np.eye(t.shape[0]) - t2))
        return "group_norm", crit, crit < margin
    if spl.kind == "MP":
        p = range_projector(t, tol)
        crit = operator_norm(p - t @ t)
        return "mp_norm", crit, crit < margin
    if spl.kind == "projection":
        p = range_projector(t, tol)
        crit = operator_norm(p - t)
        return "projection_norm", crit, crit < margin
    if spl.kind == "PLh":
        q = canonical_oblique(t, tol)
        p_rows = range_projector(t.conj().T, tol)
        crit = operator_norm(p_rows - q.conj().T @ t)
        return "plh_norm", crit, crit < margin
    return None


def convergence(spl: ProperSplitting, tol: Tolerances = DEFAULT_TOL) -> ConvergenceReport:
    """Convergence verdict for the induced iteration.

    Always computes the spectral radius of ``U^+ V``; for the named kinds
    the closed-form norm criterion is evaluated alongside it.
    """
    rho = spectral_radius(iteration_matrix(spl, tol))
    converges = rho < 1.0 - tol.rho_margin
    boundary = abs(rho - 1.0) <= tol.rho_margin
    fast = _fast_path(spl, tol)
    if fast is None:
        return ConvergenceReport(rho, converges, boundary)
    tag, crit, verdict = fast
    return ConvergenceReport(rho, converges, boundary, tag, crit, verdict)


def positivity_diagnostics(
    spl: ProperSplitting, tol: Tolerances = DEFAULT_TOL
) -> PositivityDiagnostics:
    """Evaluate the six equivalent positivity statements for a splitting."""
    t, u, v = spl.t, spl.u, spl.v
    u_pinv = moore_penrose(u, tol)
    t_pinv = moore_penrose(t, tol)
    uv = u_pinv @ v
    ut = u_pinv @ t
    p_v_rows = range_projector(v.conj().T, tol)
    p_t_rows = range_projector(t.conj().T, tol)
    c1 = is_psd(t_pinv @ v, tol)
    c2 = is_psd(uv, tol)
    c3 = c2 and is_psd(p_v_rows - uv, tol)
    c4 = is_psd(ut, tol) and is_psd(p_t_rows - ut, tol)
    # positive solvability of U X = V is decided through its canonical
    # reduced solution, which is exactly U^+ V
    c5 = c2
    defect = p_t_rows - ut
    lam = operator_norm(defect) + 1.0
    c6 = is_hermitian(ut, tol) and is_psd(lam * defect - defect @ defect, tol)
    return PositivityDiagnostics(c1, c2, c3, c4, c5, c6)


def rho_formula_check(spl: ProperSplitting, tol: Tolerances = DEFAULT_TOL):
    """Spectral radius of ``U^+ V`` against ``r / (1 + r)`` with ``r = rho(T^+ V)``.

    Requires a positive semidefinite iteration matrix; the two returned
    values agree for such splittings.
    """
    uv = iteration_matrix(spl, tol)
    if not is_psd(uv, tol):
        raise NotPSD("the formula needs a positive semidefinite iteration matrix")
    r = spectral_radius(moore_penrose(spl.t, tol) @ spl.v)
    return spectral_radius(uv), r / (1.0 + r)


def splitting_identities_check(
    spl: ProperSplitting, tol: Tolerances = DEFAULT_TOL
) -> IdentityChecks:
    """Exact identities satisfied by every proper splitting."""
    t, u, v = spl.t, spl.u, spl.v
    u_pinv = moore_penrose(u, tol)
    t_pinv = moore_penrose(t, tol)
    uv = u_pinv @ v
    compression = matrices_equal(
        moore_penrose(u_pinv @ t, tol), t_pinv @ u, tol
    )
    nullspaces = subspaces_equal(uv.conj().T, v.conj().T, tol)
    resolvent = np.eye(uv.shape[0]) - uv
    sr = np.linalg.svd(resolvent, compute_uv=False)
    if sr[-1] == 0.0 or sr[0] / sr[-1] > tol.cond_guard:
        raise SingularIteration("I minus the iteration matrix is singular")
    inverse_formula = matrices_equal(
        np.linalg.solve(resolvent, u_pinv), t_pinv, tol
    )
    return IdentityChecks(compression, nullspaces, inverse_formula)


def compare(
    a: ProperSplitting, b: ProperSplitting, tol: Tolerances = DEFAULT_TOL
) -> ComparisonReport:
    """Compare two splittings by the spectral radii of their iterations."""
    rho_a = spectral_radius(iteration_matrix(a, tol))
    rho_b = spectral_radius(iteration_matrix(b, tol))
    if abs(rho_a - rho_b) <= tol.rho_margin:
        faster = "tie"
    else:
        faster = "a" if rho_a < rho_b else "b"
    return ComparisonReport(rho_a, rho_b, faster)
