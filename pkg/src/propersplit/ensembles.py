"""Seeded random instance generators for sweeps and benchmarks.

Every generator takes a ``numpy.random.Generator`` so runs are reproducible
and instances can be drawn independently from spawned child seeds.
"""

from __future__ import annotations

import numpy as np

from .core import DEFAULT_TOL, SubspaceBasis, Tolerances, nullspace_basis, range_basis


def standard_complex(rng, m, n):
    """Complex Gaussian matrix with unit-variance entries."""
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(standard_complex(rng, n, n))
    # fix the phases so the distribution is uniform
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def stiefel(rng, n, k):
    """n x k matrix with orthonormal columns."""
    return random_unitary(rng, n)[:, :k]


def fixed_rank(rng, m, n, rank, smin=0.5, smax=2.0):
    """Random matrix with prescribed rank and singular values in [smin, smax]."""
    if rank == 0:
        return np.zeros((m, n), dtype=complex)
    s = rng.uniform(smin, smax, size=rank)
    return (stiefel(rng, m, rank) * s) @ stiefel(rng, n, rank).conj().T


def hermitian_with_spectrum(rng, n, eigs):
    """Hermitian matrix with the given nonzero eigenvalues, padded by zeros."""
    eigs = np.asarray(eigs, dtype=float)
    k = eigs.size
    v = stiefel(rng, n, k)
    return v @ (eigs[:, None] * v.conj().T)


def random_hermitian(rng, n, rank=None, lo=-1.5, hi=1.5):
    rank = n if rank is None else rank
    return hermitian_with_spectrum(rng, n, rng.uniform(lo, hi, size=rank))


def random_psd(rng, n, rank=None, lo=0.1, hi=2.0):
    rank = n if rank is None else rank
    return hermitian_with_spectrum(rng, n, rng.uniform(lo, hi, size=rank))


def orthogonal_projection(rng, n, k):
    b = stiefel(rng, n, k)
    return b @ b.conj().T


def splitting_pair_from_core(rng, m, n, rank, core):
    """Proper-splitting pair (T, U) sharing singular frames.

    ``T = X S Y*`` and ``U = X (S core^{-1}) Y*`` for an invertible
    ``core``; the iteration matrix is then similar to ``I - core``.
    """
    x = stiefel(rng, m, rank)
    y = stiefel(rng, n, rank)
    s = rng.uniform(0.7, 1.8, size=rank)
    t = (x * s) @ y.conj().T
    u = x @ (np.diag(s) @ np.linalg.inv(core)) @ y.conj().T
    return t, u


def random_proper_splitting(rng, m, n, rank, cond_cap=8.0):
    """Generic proper-splitting pair (T, U) with a well-conditioned core."""
    while True:
        core = standard_complex(rng, rank, rank) + 0.6 * np.eye(rank)
        sv = np.linalg.svd(core, compute_uv=False)
        if sv[-1] > 0 and sv[0] / sv[-1] < cond_cap:
            return splitting_pair_from_core(rng, m, n, rank, core)


def psd_iteration_splitting(rng, m, n, rank, h_eigs):
    """Pair (T, U) whose iteration matrix has spectrum ``1 - h_eigs``.

    With every ``h`` eigenvalue in (0, 1] the iteration matrix is PSD with
    spectral radius ``1 - min(h_eigs)``.
    """
    h = hermitian_with_spectrum(rng, rank, np.asarray(h_eigs, dtype=float))
    return splitting_pair_from_core(rng, m, n, rank, h)


def star_pair(rng, m, n, rank, keep, smin=0.3, smax=1.9):
    """Pair (S, T) with S below T in the star order, sharing singular triples."""
    x = stiefel(rng, m, rank)
    y = stiefel(rng, n, rank)
    s_vals = rng.uniform(smin, smax, size=rank)
    idx = rng.permutation(rank)[:keep]
    t = (x * s_vals) @ y.conj().T
    mask = np.zeros(rank)
    mask[idx] = 1.0
    s = (x * (s_vals * mask)) @ y.conj().T
    return s, t


def hermitian_star_pair(rng, n, eigs, keep):
    """Hermitian pair (S, T) with S a spectral restriction of T."""
    eigs = np.asarray(eigs, dtype=float)
    v = stiefel(rng, n, eigs.size)
    idx = rng.permutation(eigs.size)[:keep]
    mask = np.zeros(eigs.size)
    mask[idx] = 1.0
    t = v @ (eigs[:, None] * v.conj().T)
    s = v @ ((eigs * mask)[:, None] * v.conj().T)
    return s, t


def sharp_pair(rng, n, rank, keep, skew=0.4):
    """Pair (S, T) with S below T in the sharp order.

    Built in a common non-orthogonal eigenbasis, so the witnesses are
    genuinely oblique idempotents.
    """
    z = np.eye(n) + skew * standard_complex(rng, n, n)
    z_inv = np.linalg.inv(z)
    d = rng.uniform(0.4, 1.8, size=rank) * np.exp(
        1j * rng.uniform(-0.4, 0.4, size=rank)
    )
    full = np.zeros(n, dtype=complex)
    full[:rank] = d
    idx = rng.permutation(rank)[:keep]
    mask = np.zeros(n)
    mask[idx] = 1.0
    t = z @ (full[:, None] * z_inv)
    s = z @ ((full * mask)[:, None] * z_inv)
    return s, t


def pp_product(rng, n, p_dim, q_dim):
    """Product of two random orthogonal projections."""
    return orthogonal_projection(rng, n, p_dim) @ orthogonal_projection(rng, n, q_dim)


def bp_product(rng, n, proj_dim, lo=-1.5, hi=1.5):
    """Hermitian times projection; its adjoint factors as projection times Hermitian."""
    return random_hermitian(rng, n, lo=lo, hi=hi) @ orthogonal_projection(
        rng, n, proj_dim
    )


def p_psd_product(rng, n, proj_dim, rank, lo=0.1, hi=2.0):
    """Projection times PSD, the natural source of PLh instances."""
    return orthogonal_projection(rng, n, proj_dim) @ random_psd(
        rng, n, rank=rank, lo=lo, hi=hi
    )


def complement_of_nullspace(
    rng, t, tol: Tolerances = DEFAULT_TOL, mix=0.4
) -> SubspaceBasis:
    """Random complement of N(T), a mild oblique tilt of the row space."""
    rows = range_basis(np.asarray(t).conj().T, tol)
    null = nullspace_basis(t, tol)
    if null.shape[1] == 0 or rows.shape[1] == 0:
        return SubspaceBasis.from_columns(rows, tol)
    g = standard_complex(rng, null.shape[1], rows.shape[1])
    g *= mix / max(1.0, np.linalg.norm(g, 2))
    return SubspaceBasis.from_columns(rows + null @ g, tol)


def solvable_rhs(rng, t, p, scale=1.0):
    """Right-hand side W = T X with a bounded random target X."""
    x = standard_complex(rng, np.asarray(t).shape[1], p)
    x *= scale / max(1.0, np.linalg.norm(x, 2))
    return np.asarray(t) @ x


def frame_matrix(rng, d, n, smin=0.2, smax=1.8):
    """Synthesis matrix of a frame for its span with bounded modulus spectrum."""
    rank = min(d, n)
    s = rng.uniform(smin, smax, size=rank)
    return (stiefel(rng, d, rank) * s) @ stiefel(rng, n, rank).conj().T
