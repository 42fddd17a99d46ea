import numpy as np
import pytest

from propersplit import (
    NotHermitian,
    NotInPLh,
    NotInvertible,
    NotProper,
    NotPSD,
    NotUnitary,
    PropersplitError,
    ProperSplitting,
    SingularIteration,
    SubspaceBasis,
    compare,
    convergence,
    group_splitting,
    induced_conj,
    induced_invertible,
    induced_right,
    iteration_matrix,
    make_splitting,
    matrices_equal,
    mp_splitting,
    oblique_projector,
    operator_norm,
    plh_splitting,
    polar_splitting,
    positivity_diagnostics,
    projection_splitting,
    q_splitting,
    rho_formula_check,
    splitting_identities_check,
    star_leq,
)
from propersplit.core import range_projector
from propersplit.geninv import abs_op, polar
from propersplit.ensembles import (
    fixed_rank,
    hermitian_star_pair,
    hermitian_with_spectrum,
    pp_product,
    psd_iteration_splitting,
    random_hermitian,
    random_proper_splitting,
    random_unitary,
    sharp_pair,
    standard_complex,
    star_pair,
)

T_HALF = np.array([[0.5, 0, 0], [0, 0.5, 0], [0, 0.5, 0]])
S_STAR = np.array([[0.0, 0, 0], [0, 0.5, 0], [0, 0.5, 0]])
S_MINUS = np.array([[1.0, 0, 0], [2.0, 0, 0], [0, 0, 0]])
T_DIAG = np.diag([1.0, 0.5, 0.0])
RHO_T_HALF = 0.5
RHO_S_STAR = (2.0 - np.sqrt(2)) / 2.0
RHO_S_MINUS = np.sqrt(5) - 1.0


def test_make_splitting_validates_ranges():
    spl = make_splitting(np.diag([1.0, 0.5]), np.eye(2))
    assert matrices_equal(spl.v, np.diag([0.0, 0.5]))
    with pytest.raises(NotProper):
        make_splitting(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    with pytest.raises(NotProper):
        make_splitting(np.diag([1.0, 0.0]), np.eye(2))


def test_polar_splitting_known_rho():
    spl = polar_splitting(T_HALF)
    expected_u = np.array(
        [[1.0, 0, 0], [0, np.sqrt(2) / 2, 0], [0, np.sqrt(2) / 2, 0]]
    )
    np.testing.assert_allclose(spl.u, expected_u, atol=1e-12)
    rep = convergence(spl)
    assert rep.rho == pytest.approx(RHO_T_HALF, abs=1e-12)
    assert rep.converges and not rep.boundary
    assert rep.fast_path == "polar_norm"
    assert rep.criterion_value == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
    assert rep.fast_converges is True


def test_polar_splitting_divergent_example():
    rep = convergence(polar_splitting(np.diag([3.0])))
    assert rep.rho == pytest.approx(2.0, abs=1e-12)
    assert not rep.converges
    assert rep.criterion_value == pytest.approx(3.0)
    assert rep.fast_converges is False


def test_polar_rho_identity():
    rng = np.random.default_rng(101)
    for m, n in [(5, 5), (7, 4), (4, 7)]:
        for _ in range(10):
            t = fixed_rank(rng, m, n, int(rng.integers(1, min(m, n) + 1)),
                           smin=0.2, smax=2.4)
            s = np.linalg.svd(t, compute_uv=False)
            s = s[s > 1e-10]
            expected = max(1.0 - s.min(), s.max() - 1.0)
            rep = convergence(polar_splitting(t))
            assert rep.rho == pytest.approx(expected, abs=1e-9)


def test_q_splitting_of_diagonal():
    spl = q_splitting(T_DIAG)
    np.testing.assert_allclose(spl.u, np.diag([1.0, 1.0, 0.0]), atol=1e-13)
    np.testing.assert_allclose(spl.v, np.diag([0.0, 0.5, 0.0]), atol=1e-13)
    rep = convergence(spl)
    assert rep.rho == pytest.approx(0.5, abs=1e-12)
    assert rep.fast_path == "q_norm"
    assert rep.criterion_value == pytest.approx(0.5, abs=1e-12)


def test_q_splitting_matches_projection_for_hermitian():
    rng = np.random.default_rng(7)
    t = random_hermitian(rng, 6, rank=4, lo=0.2, hi=1.8)
    assert matrices_equal(q_splitting(t).u, projection_splitting(t).u)


def test_group_splitting_values():
    t = np.diag([2.0, 0.0, -0.5])
    spl = group_splitting(t)
    np.testing.assert_allclose(spl.u, np.diag([0.5, 0.0, -2.0]), atol=1e-13)
    rep = convergence(spl)
    # iteration spectrum is 1 - lambda^2 on the nonzero eigenvalues
    assert rep.rho == pytest.approx(3.0, abs=1e-12)
    assert rep.fast_path == "group_norm"
    assert rep.criterion_value == pytest.approx(3.0, abs=1e-12)


def test_mp_splitting_values():
    spl = mp_splitting(T_DIAG)
    np.testing.assert_allclose(spl.v, np.diag([0.0, 1.5, 0.0]), atol=1e-13)
    rep = convergence(spl)
    assert rep.rho == pytest.approx(0.75, abs=1e-12)
    assert rep.fast_path == "mp_norm"
    assert rep.criterion_value == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(NotHermitian):
        mp_splitting(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_projection_splitting_values():
    rep = convergence(projection_splitting(T_DIAG))
    assert rep.rho == pytest.approx(0.5, abs=1e-12)
    assert rep.fast_path == "projection_norm"
    assert rep.criterion_value == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(NotHermitian):
        projection_splitting(np.array([[0.0, 1.0], [0.0, 0.0]]))
    # boundary: a single eigenvalue exactly two gives rho exactly one
    rep = convergence(projection_splitting(np.array([[2.0]])))
    assert rep.boundary and not rep.converges


def test_plh_splitting_worked_example():
    p = np.array([[0.5, 0.5], [0.5, 0.5]])
    s = p @ np.diag([0.25, 0.0])
    spl = plh_splitting(s)
    rep = convergence(spl)
    assert rep.rho == pytest.approx(0.75, abs=1e-12)
    assert rep.fast_path == "plh_norm"
    assert rep.criterion_value == pytest.approx(0.75, abs=1e-12)
    # the polar splitting of the same matrix is strictly slower here
    cmp = compare(spl, polar_splitting(s))
    assert cmp.rho_b == pytest.approx(1.0 - np.sqrt(2) / 8.0, abs=1e-12)
    assert cmp.faster == "a"


def test_plh_rejects_outside_class():
    with pytest.raises(NotInPLh):
        plh_splitting(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_modulus_splitting_of_indefinite_never_converges():
    t = np.diag([1.0, -1.0, 0.0])
    spl = make_splitting(t, abs_op(t))
    rep = convergence(spl)
    assert rep.rho == pytest.approx(2.0, abs=1e-12)
    assert not rep.converges


def test_iteration_matrix_of_polar_is_projected_modulus_defect():
    rng = np.random.default_rng(11)
    t = fixed_rank(rng, 6, 5, 3)
    y = iteration_matrix(polar_splitting(t))
    p_rows = range_projector(t.conj().T)
    assert matrices_equal(y, p_rows - abs_op(t))


def test_convergence_on_custom_splitting_has_no_fast_path():
    rng = np.random.default_rng(13)
    t, u = random_proper_splitting(rng, 5, 5, 3)
    rep = convergence(make_splitting(t, u))
    assert rep.fast_path is None
    assert rep.criterion_value is None
    assert rep.fast_converges is None


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5, 6, 7])
def test_fast_path_agrees_with_radius(seed):
    rng = np.random.default_rng(1000 + seed)
    t = fixed_rank(rng, 6, 6, 4, smin=0.3, smax=2.4)
    rep = convergence(polar_splitting(t))
    assert rep.fast_converges == rep.converges
    eigs = rng.uniform(0.1, 1.8, size=4) * rng.choice([-1.0, 1.0], size=4)
    h = hermitian_with_spectrum(rng, 6, np.concatenate([eigs, [0.0, 0.0]]))
    for build in (q_splitting, group_splitting, mp_splitting, projection_splitting):
        r = convergence(build(h))
        assert r.fast_converges == r.converges, build.__name__


def test_positivity_diagnostics_all_true():
    rng = np.random.default_rng(17)
    t, u = psd_iteration_splitting(rng, 6, 5, 3, h_eigs=[0.3, 0.6, 1.0])
    d = positivity_diagnostics(make_splitting(t, u))
    assert all(d.as_tuple())
    assert d.all_agree


def test_positivity_diagnostics_all_false():
    rng = np.random.default_rng(19)
    t, u = psd_iteration_splitting(rng, 6, 5, 3, h_eigs=[2.0, 0.5, 0.8])
    d = positivity_diagnostics(make_splitting(t, u))
    assert not any(d.as_tuple())
    assert d.all_agree


def test_positivity_diagnostics_agree_on_generic_splittings():
    rng = np.random.default_rng(23)
    for _ in range(20):
        t, u = random_proper_splitting(rng, 6, 6, 4)
        assert positivity_diagnostics(make_splitting(t, u)).all_agree


def test_rho_formula_on_diagonal_example():
    t = np.diag([0.5, 0.25])
    spl = make_splitting(t, np.eye(2))
    rho, formula = rho_formula_check(spl)
    assert rho == pytest.approx(0.75, abs=1e-12)
    assert formula == pytest.approx(0.75, abs=1e-12)


def test_rho_formula_requires_psd_iteration():
    rng = np.random.default_rng(29)
    t, u = random_proper_splitting(rng, 5, 5, 3)
    with pytest.raises(NotPSD):
        rho_formula_check(make_splitting(t, u))


def test_identities_hold_on_random_splittings():
    rng = np.random.default_rng(31)
    for m, n in [(5, 5), (7, 4), (4, 7)]:
        t, u = random_proper_splitting(rng, m, n, 3)
        checks = splitting_identities_check(make_splitting(t, u))
        assert checks.all_hold


def test_identities_guard_near_singular_iteration():
    with pytest.raises(SingularIteration):
        splitting_identities_check(
            make_splitting(np.diag([1.0, 1.0]), np.diag([1.0, 1e14]))
        )


def test_compare_reports_tie_for_equal_radii():
    spl = polar_splitting(T_HALF)
    cmp = compare(spl, spl)
    assert cmp.faster == "tie"
    assert cmp.rho_a == cmp.rho_b


def test_star_order_comparison_of_polar_splittings():
    rep_t = convergence(polar_splitting(T_DIAG))
    rep_s = convergence(polar_splitting(S_STAR))
    assert rep_s.rho == pytest.approx(RHO_S_STAR, abs=1e-12)
    assert rep_s.rho <= rep_t.rho + 1e-12


def test_minus_order_does_not_transfer_convergence():
    # the smaller matrix sits below in the minus order yet its polar
    # iteration diverges while the larger one converges
    rep_t = convergence(polar_splitting(T_DIAG))
    rep_s = convergence(polar_splitting(S_MINUS))
    assert rep_t.converges
    assert rep_s.rho == pytest.approx(RHO_S_MINUS, abs=1e-12)
    assert not rep_s.converges


def test_sharp_order_does_not_transfer_convergence():
    t = np.diag([1.5, 0.0, 1.5])
    s = np.array([[1.5, 0, 4.5], [0, 0, 0], [0, 0, 0]])
    rep_t = convergence(polar_splitting(t))
    rep_s = convergence(polar_splitting(s))
    assert rep_t.rho == pytest.approx(0.5, abs=1e-12)
    assert rep_t.converges
    assert rep_s.rho == pytest.approx(np.sqrt(90) / 2 - 1.0, abs=1e-12)
    assert not rep_s.converges


def test_star_transfer_keeps_polar_parts():
    rng = np.random.default_rng(37)
    for _ in range(15):
        s, t = star_pair(rng, 6, 5, rank=4, keep=2)
        u_t = polar(t).isometry
        u_s = polar(s).isometry
        p_s = range_projector(s)
        assert matrices_equal(u_s, p_s @ u_t)
        assert convergence(polar_splitting(s)).rho <= (
            convergence(polar_splitting(t)).rho + 1e-10
        )


def test_compression_criterion_transfers_to_q_splitting():
    # when T satisfies the compression-norm criterion, every matrix below
    # it in the star order inherits a convergent Q splitting
    rng = np.random.default_rng(41)
    found = 0
    while found < 10:
        t = np.eye(5) + 0.3 * standard_complex(rng, 5, 5)
        crit = operator_norm(
            range_projector(t.conj().T) @ (np.eye(5) - t)
        )
        if crit >= 0.999:
            continue
        u, sv, vh = np.linalg.svd(t)
        keep = sorted(rng.choice(5, size=3, replace=False))
        s = (u[:, keep] * sv[keep]) @ vh[keep]
        assert star_leq(s, t)
        assert convergence(q_splitting(s)).converges
        found += 1


def test_product_criterion_transfers_to_group_splitting():
    rng = np.random.default_rng(43)
    found = 0
    while found < 10:
        t = np.eye(5) + 0.25 * standard_complex(rng, 5, 5)
        u, sv, vh = np.linalg.svd(t)
        keep = sorted(rng.choice(5, size=3, replace=False))
        s = (u[:, keep] * sv[keep]) @ vh[keep]
        crit = operator_norm(
            range_projector(s.conj().T) @ (np.eye(5) - s @ t)
        )
        if crit >= 0.999:
            continue
        try:
            rep = convergence(group_splitting(s))
        except PropersplitError:
            continue
        assert rep.converges
        found += 1


def test_idempotent_transfer_with_norm_bound():
    # T Hermitian with a convergent projection splitting; a mildly oblique
    # idempotent Q with ||Q|| below 1/||P - T|| pushes convergence to the
    # Q splitting of S = (Q T)*
    rng = np.random.default_rng(47)
    found = 0
    while found < 10:
        n, r, k = 6, 4, 2
        w = np.linalg.qr(standard_complex(rng, n, n))[0]
        lam = rng.uniform(0.25, 1.75, size=r)
        t = (w[:, :r] * lam) @ w[:, :r].conj().T
        c = operator_norm(range_projector(t) - t)
        a_cols = w[:, :k] + 0.15 * w[:, k:r] @ standard_complex(rng, r - k, k)
        rest = np.hstack([w[:, k:r], w[:, r:]])
        q = oblique_projector(
            SubspaceBasis.from_columns(a_cols), SubspaceBasis.from_columns(rest)
        )
        if operator_norm(q) >= 1.0 / c:
            continue
        s = (q @ t).conj().T
        try:
            rep = convergence(q_splitting(s))
        except PropersplitError:
            continue
        assert rep.converges
        found += 1


def test_hermitian_star_pairs_inherit_mp_convergence():
    rng = np.random.default_rng(53)
    for _ in range(10):
        eigs = np.concatenate(
            [rng.uniform(0.1, 1.35, size=3), -rng.uniform(0.1, 1.35, size=2)]
        )
        s, t = hermitian_star_pair(rng, 7, eigs, keep=3)
        rep_t = convergence(mp_splitting(t))
        assert rep_t.converges
        assert convergence(mp_splitting(s)).converges


def test_projection_products_give_convergent_q_splittings():
    rng = np.random.default_rng(59)
    for _ in range(15):
        t = pp_product(rng, 6, p_dim=4, q_dim=3)
        if operator_norm(t) < 1e-8:
            continue
        try:
            rep = convergence(q_splitting(t))
        except PropersplitError:
            continue
        assert rep.converges


def test_induced_right_matches_polar_of_product():
    rng = np.random.default_rng(61)
    t = fixed_rank(rng, 5, 5, 3)
    w = random_unitary(rng, 5)
    ind = induced_right(polar_splitting(t), w)
    assert ind.kind == "induced_right"
    assert matrices_equal(ind.u, polar(t @ w).isometry)
    assert convergence(ind).rho == pytest.approx(
        convergence(polar_splitting(t)).rho, abs=1e-10
    )


def test_induced_conj_preserves_radius():
    rng = np.random.default_rng(67)
    t, u = random_proper_splitting(rng, 6, 6, 4)
    spl = make_splitting(t, u)
    w = random_unitary(rng, 6)
    assert convergence(induced_conj(spl, w)).rho == pytest.approx(
        convergence(spl).rho, abs=1e-10
    )


def test_induced_rejects_non_unitary():
    spl = polar_splitting(T_HALF)
    with pytest.raises(NotUnitary):
        induced_right(spl, np.diag([1.0, 2.0, 1.0]))
    with pytest.raises(NotUnitary):
        induced_conj(spl, np.diag([1.0, 2.0, 1.0]))


def test_induced_invertible_tracks_projection_splitting():
    rng = np.random.default_rng(71)
    t = random_hermitian(rng, 5, rank=3, lo=0.2, hi=1.8)
    g = np.eye(5) + 0.4 * standard_complex(rng, 5, 5)
    spl = induced_invertible(t, g)
    assert spl.kind == "induced_invertible"
    assert convergence(spl).rho == pytest.approx(
        convergence(projection_splitting(t)).rho, abs=1e-9
    )
    with pytest.raises(NotInvertible):
        induced_invertible(t, np.diag([1.0, 1.0, 1.0, 1.0, 0.0]))
    with pytest.raises(NotHermitian):
        induced_invertible(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))


def test_group_splitting_radius_is_eigenvalue_formula():
    # the group-splitting iteration has radius max |1 - lambda^2| over the
    # nonzero eigenvalues, with no normality assumption
    rng = np.random.default_rng(73)
    for _ in range(15):
        n, r = 6, 4
        z = np.eye(n) + 0.7 * standard_complex(rng, n, n)
        lam = rng.uniform(0.4, 1.6, size=r) * np.exp(
            1j * rng.uniform(-0.5, 0.5, size=r)
        )
        d = np.zeros(n, complex)
        d[:r] = lam
        t = z @ np.diag(d) @ np.linalg.inv(z)
        rho = convergence(group_splitting(t)).rho
        assert rho == pytest.approx(np.abs(1 - lam**2).max(), abs=1e-9)


def test_sharp_pairs_share_iteration_bound():
    # a sharp-related pair shares eigenvalues, so the group-splitting
    # radius of the smaller matrix never exceeds that of the larger
    rng = np.random.default_rng(79)
    for _ in range(10):
        s, t = sharp_pair(rng, 6, rank=4, keep=2)
        rep_s = convergence(group_splitting(s))
        rep_t = convergence(group_splitting(t))
        assert rep_s.rho <= rep_t.rho + 1e-9
