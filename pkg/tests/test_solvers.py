import numpy as np
import pytest

from opeq.conditions import verify_solution
from opeq.linalg import InputError, frob, herm_eig, pinv, psd_sqrt, spectral_norm
from opeq.solvers import (
    axb_reduced_solve,
    congruence_solve,
    douglas_reduced_solve,
    general_solution,
    pt_solve,
    riccati_geomean,
)
from opeq.sweep import (
    congruence_solvable_pair,
    congruence_unsolvable_pair,
    douglas_solvable_pair,
    douglas_unsolvable_pair,
    norm_bound_bisect,
    random_matrix,
    random_psd,
    random_psd_singular,
    random_spd,
)


# --- AX = B ------------------------------------------------------------------


def test_douglas_frozen_unsolvable_residual_half():
    # least-squares residual of X for A = e1 e1*, B = e2 e2* is exactly 1/2
    # relative to 1 + ||B||
    rep = douglas_reduced_solve(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert not rep.solvable
    assert rep.residual == pytest.approx(0.5, abs=1e-14)


def test_douglas_solvable_roundtrip_and_uniqueness():
    rng = np.random.default_rng(13)
    for _ in range(100):
        m, n, k = (int(rng.integers(2, 7)) for _ in range(3))
        a, b = douglas_solvable_pair(rng, m, n, k)
        rep = douglas_reduced_solve(a, b)
        assert rep.solvable
        assert rep.residual <= 1e-8
        # the reduced solution lives in range(A*): N_A D = 0
        assert frob(rep.left_null_projector @ rep.solution) <= 1e-8 * (1.0 + frob(rep.solution))


def test_douglas_unsolvable_flagged():
    rng = np.random.default_rng(14)
    for _ in range(100):
        m, n, k = (int(rng.integers(2, 7)) for _ in range(3))
        a, b = douglas_unsolvable_pair(rng, m, n, k)
        assert not douglas_reduced_solve(a, b).solvable


# --- AXB = C -----------------------------------------------------------------


def test_axb_reduced_and_general_family():
    rng = np.random.default_rng(15)
    for _ in range(60):
        m, n = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        p, q = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        a = random_matrix(rng, m, n)
        b = random_matrix(rng, p, q)
        x0 = random_matrix(rng, n, p, rank=min(n, p))
        c = a @ x0 @ b
        rep = axb_reduced_solve(a, b, c)
        assert rep.solvable
        v1 = random_matrix(rng, n, p)
        v2 = random_matrix(rng, n, p)
        x = general_solution(rep, v1, v2)
        scale = 1.0 + frob(c)
        assert frob(a @ x @ b - c) / scale <= 1e-8
        # every member of the family projects back to the same reduced core
        assert frob(a @ (x - rep.solution) @ b) / scale <= 1e-8


def test_axb_shape_mismatch():
    with pytest.raises(InputError):
        axb_reduced_solve(np.eye(2), np.eye(3), np.zeros((3, 3)))


def test_general_solution_block_shape_check():
    rep = axb_reduced_solve(np.eye(2), np.eye(2), np.eye(2))
    with pytest.raises(InputError):
        general_solution(rep, np.zeros((3, 3)), np.zeros((2, 2)))


# --- AXA* = C ----------------------------------------------------------------


def test_congruence_frozen_diagonal():
    # a = diag(2, 0), c = diag(8, 0): x = a+ c a+* = diag(2, 0)
    rep = congruence_solve(np.diag([2.0, 0.0]), np.diag([8.0, 0.0]))
    assert rep.solvable
    assert np.allclose(rep.solution, np.diag([2.0, 0.0]), atol=1e-12)


def test_congruence_solvable_psd_output():
    rng = np.random.default_rng(16)
    for _ in range(100):
        m, n = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        a, c = congruence_solvable_pair(rng, m, n)
        rep = congruence_solve(a, c)
        assert rep.solvable and rep.residual <= 1e-8
        assert herm_eig(rep.solution).values[0] >= -1e-9 * (1.0 + spectral_norm(rep.solution))


def test_congruence_unsolvable_both_kinds():
    rng = np.random.default_rng(17)
    for i in range(100):
        m, n = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        kind = "range" if i % 2 == 0 else "indefinite"
        a, c = congruence_unsolvable_pair(rng, m, n, kind)
        assert not congruence_solve(a, c).solvable


def test_congruence_rejects_non_hermitian_rhs():
    with pytest.raises(InputError):
        congruence_solve(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))


# --- XHX = K -----------------------------------------------------------------


def test_pt_frozen_diagonal():
    rep = pt_solve(np.diag([1.0, 4.0]), np.diag([9.0, 1.0]))
    assert rep.solvable
    assert np.allclose(rep.solution, np.diag([3.0, 0.5]), atol=1e-12)
    assert rep.a_min == pytest.approx(3.0, rel=1e-12)
    assert rep.residual <= 1e-12


def test_pt_random_roundtrip_unique_and_bounded():
    rng = np.random.default_rng(18)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        h = random_spd(rng, n)
        k = random_psd(rng, n)
        rep = pt_solve(h, k)
        assert rep.solvable
        assert rep.residual <= 1e-8
        x = rep.solution
        # alternate route through the two-sided reduced solver
        hs = psd_sqrt(h)
        inner = hs @ k @ hs
        mid = psd_sqrt(0.5 * (inner + inner.conj().T))
        alt = axb_reduced_solve(hs, hs, mid)
        assert frob(x - alt.solution) / (1.0 + frob(x)) <= 1e-8
        # minimal norm bound from an independent bisection
        a_star = norm_bound_bisect(h, k)
        assert spectral_norm(x) <= a_star + 1e-8 * (1.0 + a_star)


def test_pt_singular_h_declines_but_reports():
    rep = pt_solve(np.diag([1.0, 0.0]), np.ones((2, 2)))
    assert rep.solution is None
    assert not rep.h_nonsingular
    assert len(rep.conditions) == 4
    # necessity holds for this constructed pair even though h is singular
    assert rep.conditions[0].holds


def test_pt_rejects_non_psd_inputs():
    with pytest.raises(InputError):
        pt_solve(np.diag([1.0, -1.0]), np.eye(2))
    with pytest.raises(InputError):
        pt_solve(np.eye(2), np.diag([1.0, -1.0]))


def test_pt_solution_on_constructed_k_recovers_x0():
    # with x0 psd and k = x0 h x0 the solution is unique, so the solver
    # must return x0 itself
    rng = np.random.default_rng(21)
    for _ in range(40):
        n = int(rng.integers(2, 6))
        h = random_spd(rng, n)
        x0 = random_psd(rng, n)
        k = x0 @ h @ x0
        rep = pt_solve(h, 0.5 * (k + k.conj().T))
        assert rep.solvable
        assert frob(rep.solution - x0) / (1.0 + frob(x0)) <= 1e-7


# --- Riccati -----------------------------------------------------------------


def test_riccati_frozen_commuting():
    g = riccati_geomean(np.diag([1.0, 4.0]), np.diag([4.0, 1.0]))
    assert np.allclose(g, 2.0 * np.eye(2), atol=1e-12)


def test_riccati_residual_symmetry_fixed_point():
    rng = np.random.default_rng(22)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        a = random_spd(rng, n)
        b = random_spd(rng, n)
        g = riccati_geomean(a, b)
        assert verify_solution("riccati", g, a=a, b=b) <= 1e-8
        assert frob(g - riccati_geomean(b, a)) / (1.0 + frob(g)) <= 1e-8
        assert frob(riccati_geomean(a, a) - a) / (1.0 + frob(a)) <= 1e-9


def test_riccati_rejects_singular_first_argument():
    with pytest.raises(InputError):
        riccati_geomean(np.diag([1.0, 0.0]), np.eye(2))


def test_riccati_accepts_singular_second_argument():
    b = np.diag([4.0, 0.0])
    g = riccati_geomean(np.eye(2), b)
    assert np.allclose(g, np.diag([2.0, 0.0]), atol=1e-12)
