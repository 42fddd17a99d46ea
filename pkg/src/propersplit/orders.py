"""Partial orders on matrices: star, minus, sharp and Loewner.

Each decision procedure returns an ``OrderVerdict`` whose witnesses, when
the relation holds, are the projectors or idempotents realizing it.  The
module also provides the spectral criterion for the Loewner order between
positive semidefinite matrices and the antitonicity check for the
Moore-Penrose inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerances,
    as_matrix,
    is_hermitian,
    is_psd,
    matrices_equal,
    nullspace_basis,
    numerical_rank,
    operator_norm,
    range_basis,
    range_included,
    range_projector,
    spectral_radius,
)
from .errors import NotGroupInvertible, NotHermitian, NotPSD, ShapeMismatch
from .geninv import (
    canonical_oblique,
    hermitian_sqrt,
    moore_penrose,
    oblique_projector,
)


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    witness_left: np.ndarray | None = None
    witness_right: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.holds


def _check_same_shape(s, t):
    s, t = as_matrix(s), as_matrix(t)
    if s.shape != t.shape:
        raise ShapeMismatch(f"order needs equal shapes, got {s.shape} and {t.shape}")
    return s, t


def star_leq(s, t, tol: Tolerances = DEFAULT_TOL) -> OrderVerdict:
    """Star order: ``S = P_S T`` and ``S* = P_S* T*``."""
    s, t = _check_same_shape(s, t)
    p_left = range_projector(s, tol)
    p_right = range_projector(s.conj().T, tol)
    holds = matrices_equal(p_left @ t, s, tol) and matrices_equal(
        p_right @ t.conj().T, s.conj().T, tol
    )
    if not holds:
        return OrderVerdict(False)
    return OrderVerdict(True, p_left, p_right)


def star_leq_by_ranges(s, t, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Star order via orthogonal range decompositions.

    Checks that the ranges of ``S`` and ``T - S`` are orthogonal and fill
    the range of ``T``, on both sides.  Used to cross-validate
    :func:`star_leq`.
    """
    s, t = _check_same_shape(s, t)
    d = t - s
    rank_add = numerical_rank(t, tol) == numerical_rank(s, tol) + numerical_rank(d, tol)
    ortho = (
        operator_norm(range_projector(s, tol) @ range_projector(d, tol))
        <= tol.eq_atol
    )
    ortho_adj = (
        operator_norm(
            range_projector(s.conj().T, tol) @ range_projector(d.conj().T, tol)
        )
        <= tol.eq_atol
    )
    return rank_add and ortho and ortho_adj


def _minus_witness(s, t, tol: Tolerances) -> np.ndarray:
    """Idempotent P with range R(S) and null space R(T - S) + R(T)^perp."""
    along = np.hstack(
        [range_basis(t - s, tol), nullspace_basis(t.conj().T, tol)]
    )
    m_sub = SubspaceBasis.from_columns(range_basis(s, tol), tol)
    n_sub = SubspaceBasis.from_columns(along, tol)
    return oblique_projector(m_sub, n_sub, tol)


def minus_leq(s, t, tol: Tolerances = DEFAULT_TOL) -> OrderVerdict:
    """Minus order, decided by rank additivity on both sides."""
    s, t = _check_same_shape(s, t)
    d = t - s
    rs, rd, rt = (
        numerical_rank(s, tol),
        numerical_rank(d, tol),
        numerical_rank(t, tol),
    )
    cols = rt == rs + rd
    rows = (
        numerical_rank(t.conj().T, tol)
        == numerical_rank(s.conj().T, tol) + numerical_rank(d.conj().T, tol)
    )
    if not (cols and rows):
        return OrderVerdict(False)
    left = _minus_witness(s, t, tol)
    right = _minus_witness(s.conj().T, t.conj().T, tol)
    return OrderVerdict(True, left, right)


def sharp_leq(s, t, tol: Tolerances = DEFAULT_TOL) -> OrderVerdict:
    """Sharp order: ``S = Q T = T Q`` with ``Q`` the canonical idempotent of S."""
    s, t = _check_same_shape(s, t)
    if s.shape[0] != s.shape[1]:
        raise ShapeMismatch("sharp order needs square matrices")
    if matrices_equal(s, t, tol):
        try:
            q = canonical_oblique(s, tol)
        except NotGroupInvertible:
            return OrderVerdict(True)
        return OrderVerdict(True, q, q)
    q = canonical_oblique(s, tol)
    holds = matrices_equal(q @ t, s, tol) and matrices_equal(t @ q, s, tol)
    if not holds:
        return OrderVerdict(False)
    return OrderVerdict(True, q, q)


def loewner_leq(s, t, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Loewner order between Hermitian matrices: ``T - S`` is PSD."""
    s, t = _check_same_shape(s, t)
    if not is_hermitian(s, tol) or not is_hermitian(t, tol):
        raise NotHermitian("loewner order is defined for Hermitian matrices")
    return is_psd(t - s, tol)


def blt_criterion(s, t, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Spectral test for ``S <= T`` between PSD matrices.

    Holds when the spectral radius of ``S^(1/2) T^+ S^(1/2)`` is at most
    one and the range of ``S^(1/2)`` is contained in the range of ``T``.
    """
    s, t = _check_same_shape(s, t)
    if not is_psd(s, tol) or not is_psd(t, tol):
        raise NotPSD("criterion needs positive semidefinite inputs")
    s_half = hermitian_sqrt(s, tol)
    rho = spectral_radius(s_half @ moore_penrose(t, tol) @ s_half)
    return rho <= 1.0 + tol.rho_margin and range_included(s_half, t, tol)


def _trivial_intersection(a, b, tol: Tolerances) -> bool:
    """Whether R(a) meets N(b) only at zero, by rank additivity."""
    ra = range_basis(a, tol)
    nb = nullspace_basis(b, tol)
    k = ra.shape[1] + nb.shape[1]
    if k == 0:
        return True
    stacked = np.hstack([ra, nb])
    return numerical_rank(stacked, tol) == k


def mp_antitone_check(s, t, tol: Tolerances = DEFAULT_TOL):
    """Evaluate the three statements tied to Moore-Penrose antitonicity.

    Returns the triple of booleans ``(S <= T, T^+ <= S^+, trivial
    intersections)`` where the last holds when ``R(S)`` meets ``N(T)`` and
    ``R(T)`` meets ``N(S)`` only at zero.  Any two of them imply the third.
    """
    s, t = _check_same_shape(s, t)
    if not is_psd(s, tol) or not is_psd(t, tol):
        raise NotPSD("antitonicity check needs positive semidefinite inputs")
    first = is_psd(t - s, tol)
    second = is_psd(moore_penrose(s, tol) - moore_penrose(t, tol), tol)
    third = _trivial_intersection(s, t, tol) and _trivial_intersection(t, s, tol)
    return first, second, third
