"""Generalized inverses, polar parts, oblique projectors and reduced solutions.

The Moore-Penrose inverse is computed from the SVD with the shared rank
cutoff, the group inverse from a full-rank factorization, and oblique
projectors from a pair of complementary bases.  ``douglas_reduced`` solves
``T X = W`` with the range of ``X`` confined to a prescribed complement of
the null space of ``T``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerances,
    as_matrix,
    is_psd,
    nullspace_basis,
    operator_norm,
    range_included,
    svd,
    symmetrize,
    _sv_cutoff,
)
from .errors import (
    NonSquare,
    NotComplements,
    NotGroupInvertible,
    NotPSD,
    ShapeMismatch,
    Unsolvable,
)


def moore_penrose(t, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse via SVD inversion above the rank cutoff."""
    t = as_matrix(t)
    u, s, vh = svd(t, tol)
    cutoff = _sv_cutoff(s, t.shape, tol)
    r = int(np.count_nonzero(s > cutoff))
    if r == 0:
        return np.zeros((t.shape[1], t.shape[0]), dtype=complex)
    return vh[:r].conj().T @ (u[:, :r].conj().T / s[:r, None])


def hermitian_sqrt(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues below the rank cutoff are flushed to zero before taking
    roots, so near-null directions do not resurface at sqrt(eps) size.
    """
    a = as_matrix(a)
    if not is_psd(a, tol):
        raise NotPSD("hermitian_sqrt needs a positive semidefinite input")
    w, v = np.linalg.eigh(symmetrize(a))
    wmax = float(np.max(np.abs(w), initial=0.0))
    cutoff = _sv_cutoff(np.array([wmax]), a.shape, tol)
    w = np.where(w > cutoff, w, 0.0)
    return v @ (np.sqrt(w)[:, None] * v.conj().T)


def abs_op(t, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Modulus ``(T* T)^(1/2)``, assembled from the SVD of ``T``.

    Going through the singular values of ``T`` itself, rather than the
    eigenvalues of ``T* T``, keeps the rank decision unsquared.
    """
    t = as_matrix(t)
    u, s, vh = svd(t, tol)
    cutoff = _sv_cutoff(s, t.shape, tol)
    r = int(np.count_nonzero(s > cutoff))
    return vh[:r].conj().T @ (s[:r, None] * vh[:r])


class PolarParts(NamedTuple):
    isometry: np.ndarray
    modulus: np.ndarray


def polar(t, tol: Tolerances = DEFAULT_TOL) -> PolarParts:
    """Polar decomposition ``T = isometry @ modulus``.

    The isometry is the partial isometry with the same null space as
    ``T``; both parts come from the singular vectors above the shared
    rank cutoff.
    """
    t = as_matrix(t)
    u, s, vh = svd(t, tol)
    cutoff = _sv_cutoff(s, t.shape, tol)
    r = int(np.count_nonzero(s > cutoff))
    isometry = u[:, :r] @ vh[:r]
    modulus = vh[:r].conj().T @ (s[:r, None] * vh[:r])
    return PolarParts(isometry, modulus)


def group_inverse(t, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Group inverse of a square matrix with index at most one.

    Uses the full-rank factorization ``T = B C`` from the SVD; the group
    inverse exists exactly when ``C B`` is invertible, which is checked
    both through the rank of ``T^2`` and a condition-number guard.
    """
    t = as_matrix(t)
    if t.shape[0] != t.shape[1]:
        raise NonSquare(f"group inverse needs a square matrix, got {t.shape}")
    u, s, vh = svd(t, tol)
    cutoff = _sv_cutoff(s, t.shape, tol)
    r = int(np.count_nonzero(s > cutoff))
    if r == 0:
        return np.zeros_like(t)
    t2 = t @ t
    s2 = np.linalg.svd(t2, compute_uv=False)
    if int(np.count_nonzero(s2 > _sv_cutoff(s2, t2.shape, tol))) < r:
        raise NotGroupInvertible("rank of T^2 is below the rank of T")
    b = u[:, :r] * s[:r]
    c = vh[:r]
    cb = c @ b
    scb = np.linalg.svd(cb, compute_uv=False)
    if scb[-1] == 0.0 or scb[0] / scb[-1] > tol.cond_guard:
        raise NotGroupInvertible("core factor C B is numerically singular")
    cb_inv = np.linalg.inv(cb)
    return b @ cb_inv @ cb_inv @ c


def canonical_oblique(t, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Idempotent ``T T^#`` projecting onto the range along the null space."""
    t = as_matrix(t)
    return t @ group_inverse(t, tol)


def oblique_projector(
    m_space: SubspaceBasis, n_space: SubspaceBasis, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Projector onto ``m_space`` along ``n_space``.

    The two subspaces must decompose the ambient space; the stacked basis
    ``[M | N]`` is rejected when its condition number exceeds ``cond_guard``.
    """
    if m_space.ambient_dim != n_space.ambient_dim:
        raise ShapeMismatch("subspaces live in different ambient spaces")
    n = m_space.ambient_dim
    if m_space.dim + n_space.dim != n:
        raise NotComplements(
            f"dims {m_space.dim} + {n_space.dim} do not fill ambient dim {n}"
        )
    k = np.hstack([m_space.basis, n_space.basis])
    s = np.linalg.svd(k, compute_uv=False)
    if s.size and (s[-1] == 0.0 or s[0] / s[-1] > tol.cond_guard):
        raise NotComplements("stacked basis [M | N] is numerically singular")
    b = np.hstack([m_space.basis, np.zeros((n, n_space.dim), dtype=complex)])
    return np.linalg.solve(k.T, b.T).T


def _as_subspace(m, ambient: int, tol: Tolerances) -> SubspaceBasis:
    if isinstance(m, SubspaceBasis):
        if m.ambient_dim != ambient:
            raise ShapeMismatch(
                f"subspace ambient dim {m.ambient_dim} does not match {ambient}"
            )
        return m
    cols = as_matrix(m)
    if cols.shape[0] != ambient:
        raise ShapeMismatch(
            f"subspace columns have {cols.shape[0]} rows, expected {ambient}"
        )
    return SubspaceBasis.from_columns(cols, tol)


def douglas_reduced(t, w, m=None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solution of ``T X = W`` whose range lies in the complement ``m``.

    With ``m`` omitted the complement is the orthogonal one and the
    solution is the minimal-norm ``T^+ W``.  Raises ``Unsolvable`` when the
    range of ``W`` is not contained in the range of ``T`` and
    ``NotComplements`` when ``m`` fails to complement the null space.
    """
    t, w = as_matrix(t), as_matrix(w)
    if w.shape[0] != t.shape[0]:
        raise ShapeMismatch(f"W has {w.shape[0]} rows, T has {t.shape[0]}")
    if not range_included(w, t, tol):
        raise Unsolvable("range of W is not inside the range of T")
    x = moore_penrose(t, tol) @ w
    if m is None:
        return x
    m_sub = _as_subspace(m, t.shape[1], tol)
    n_sub = SubspaceBasis.from_columns(nullspace_basis(t, tol), tol)
    q = oblique_projector(m_sub, n_sub, tol)
    return q @ x


def reverse_order_law_holds(s, t, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``(S T)^+ = T^+ S^+``, decided by the two range inclusions."""
    s, t = as_matrix(s), as_matrix(t)
    if s.shape[1] != t.shape[0]:
        raise ShapeMismatch(f"cannot multiply {s.shape} by {t.shape}")
    left = range_included(s.conj().T @ s @ t, t, tol)
    right = range_included(t @ t.conj().T @ s.conj().T, s.conj().T, tol)
    return left and right
