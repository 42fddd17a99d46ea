"""Dense complex-matrix substrate shared by every other module.

All operations are pure functions on numpy arrays.  Rank decisions follow
the usual SVD rule: singular values at or below ``rank_rtol * sigma_1`` are
treated as zero, where ``rank_rtol`` defaults to ``max(m, n)`` times the
machine epsilon.  Norms are operator (spectral) norms throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonSquare, NumericalFailure

EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds shared across the package.

    :param rank_rtol: relative singular-value cutoff for rank decisions;
        ``None`` means ``max(m, n) * eps`` for an ``m x n`` input.
    :param eq_atol: absolute tolerance for matrix, subspace and spectral
        comparisons.
    :param rho_margin: strictness band around one for spectral-radius
        verdicts; ``rho`` counts as "below one" only below ``1 - rho_margin``.
    :param cond_guard: condition-number bound above which a square system
        (for example a candidate pair of complementary bases) is treated
        as numerically singular.
    """

    rank_rtol: float | None = None
    eq_atol: float = 1e-9
    rho_margin: float = 1e-10
    cond_guard: float = 1e-3 / EPS

    def __post_init__(self):
        if self.rank_rtol is not None and not self.rank_rtol > 0:
            raise ValueError("rank_rtol must be positive")
        for name in ("eq_atol", "rho_margin", "cond_guard"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_TOL = Tolerances()


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a 2-d complex array and validate its entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real) & np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def svd(a, tol: Tolerances = DEFAULT_TOL):
    """Full SVD of ``a`` as ``(u, s, vh)`` with singular values descending."""
    a = as_matrix(a)
    try:
        return np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - backend failure
        raise NumericalFailure(f"svd did not converge: {exc}") from exc


def _sv_cutoff(s: np.ndarray, shape, tol: Tolerances) -> float:
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    rtol = tol.rank_rtol if tol.rank_rtol is not None else max(shape) * EPS
    return rtol * float(s[0])


def numerical_rank(a, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of singular values above the relative cutoff."""
    a = as_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.count_nonzero(s > _sv_cutoff(s, a.shape, tol)))


def range_basis(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the column space, as columns."""
    a = as_matrix(a)
    u, s, _ = svd(a, tol)
    r = int(np.count_nonzero(s > _sv_cutoff(s, a.shape, tol)))
    return u[:, :r]


def nullspace_basis(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the null space, as columns."""
    a = as_matrix(a)
    _, s, vh = svd(a, tol)
    cutoff = _sv_cutoff(s, a.shape, tol)
    r = int(np.count_nonzero(s > cutoff))
    return vh[r:, :].conj().T


def range_projector(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the column space of ``a``."""
    b = range_basis(a, tol)
    return b @ b.conj().T


def operator_norm(a) -> float:
    """Largest singular value."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def smallest_positive_sv(a, tol: Tolerances = DEFAULT_TOL) -> float:
    """Smallest singular value above the rank cutoff, or 0.0 for rank zero."""
    a = as_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    r = int(np.count_nonzero(s > _sv_cutoff(s, a.shape, tol)))
    return float(s[r - 1]) if r > 0 else 0.0


def spectral_radius(a) -> float:
    """Largest eigenvalue magnitude, via a dense eigensolve."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"spectral radius needs a square matrix, got {a.shape}")
    try:
        w = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - backend failure
        raise NumericalFailure(f"eigenvalue solve failed: {exc}") from exc
    return float(np.max(np.abs(w))) if w.size else 0.0


def symmetrize(a) -> np.ndarray:
    """Hermitian part ``(a + a*) / 2``."""
    a = as_matrix(a)
    return (a + a.conj().T) / 2.0


def is_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return operator_norm(a - a.conj().T) <= tol.eq_atol


def is_psd(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Hermitian with spectrum above ``-eq_atol``; non-square counts as no."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1] or not is_hermitian(a, tol):
        return False
    w = np.linalg.eigvalsh(symmetrize(a))
    return bool(w.size == 0 or w[0] >= -tol.eq_atol)


def matrices_equal(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Operator-norm equality with mixed absolute/relative scaling."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        return False
    scale = max(1.0, operator_norm(a), operator_norm(b))
    return operator_norm(a - b) <= tol.eq_atol * scale


def range_included(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the column space of ``a`` lies inside that of ``b``."""
    a = as_matrix(a)
    p = range_projector(b, tol)
    resid = a - p @ a
    return operator_norm(resid) <= tol.eq_atol * max(1.0, operator_norm(a))


def subspaces_equal(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the column spaces of ``a`` and ``b`` coincide."""
    pa = range_projector(a, tol)
    pb = range_projector(b, tol)
    return operator_norm(pa - pb) <= tol.eq_atol


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace given by orthonormal columns in an ambient space.

    ``rank_tol`` records the absolute singular-value cutoff that was used
    to decide the dimension when the basis was extracted from a spanning
    set.
    """

    basis: np.ndarray
    ambient_dim: int
    rank_tol: float

    def __post_init__(self):
        b = as_matrix(self.basis)
        object.__setattr__(self, "basis", b)
        if b.shape[0] != self.ambient_dim:
            raise ValueError(
                f"basis rows {b.shape[0]} do not match ambient dim {self.ambient_dim}"
            )
        if b.shape[1] > self.ambient_dim:
            raise ValueError("more basis columns than ambient dimensions")
        gram = b.conj().T @ b
        if operator_norm(gram - np.eye(b.shape[1])) > 1e-12:
            raise ValueError("basis columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        return self.basis @ self.basis.conj().T

    @classmethod
    def from_columns(cls, columns, tol: Tolerances = DEFAULT_TOL) -> "SubspaceBasis":
        """Orthonormalize a spanning set of columns, dropping rank defects."""
        cols = as_matrix(columns)
        u, s, _ = svd(cols, tol)
        cutoff = _sv_cutoff(s, cols.shape, tol)
        r = int(np.count_nonzero(s > cutoff))
        return cls(u[:, :r], cols.shape[0], cutoff)
