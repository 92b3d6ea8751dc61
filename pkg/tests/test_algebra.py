from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barut_kit import algebra as alg

REPS = list(alg.Representation)
METRICS = list(alg.Metric)


@pytest.mark.parametrize("rep,metric", list(itertools.product(REPS, METRICS)))
def test_clifford_relation_every_rep_and_metric(rep, metric):
    gs = alg.build_gammas(rep, metric)
    assert alg.clifford_residual(gs) < 1e-12
    assert alg.gamma5_residual(gs) < 1e-12


def test_dirac_standard_anticommutators_all_pairs():
    gs = alg.build_gammas("dirac")
    g = np.diag([1.0, -1, -1, -1])
    for mu, nu in itertools.product(range(4), repeat=2):
        r = alg.anticommutator(gs.gammas[mu], gs.gammas[nu]) - 2 * g[mu, nu] * np.eye(4)
        assert np.allclose(r, 0, atol=1e-12)


def test_majorana_gammas_purely_imaginary():
    gs = alg.build_gammas("majorana")
    assert max(np.max(np.abs(g.real)) for g in gs.gammas) < 1e-12


def test_chiral_gamma5_from_dirac_basis_by_direct_multiplication():
    # gamma5 in the standard basis is off-diagonal identity blocks; rotate it by hand.
    g5_dirac = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    v = alg.dirac_unitary()
    g5_chiral = v.conj().T @ g5_dirac @ v
    assert np.allclose(g5_chiral, np.diag([1, 1, -1, -1]), atol=1e-14)
    assert np.allclose(alg.build_gammas("chiral").gamma5, np.diag([1, 1, -1, -1]), atol=1e-14)


def test_euclidean_gammas_hermitian_and_continued():
    e = alg.build_gammas("chiral", "euclidean")
    m = alg.build_gammas("chiral", "minkowski")
    assert all(alg.is_hermitian(g) for g in e.gammas)
    assert np.allclose(e.gammas[3], m.gammas[0])
    for k in range(3):
        assert np.allclose(e.gammas[k], -1j * m.gammas[k + 1])


def test_sigma_tensor_examples():
    sig = alg.sigma_tensor(alg.build_gammas("dirac"))
    assert np.allclose(sig[0, 0], 0)
    s3 = np.diag([1, -1])
    expected = np.block([[s3, np.zeros((2, 2))], [np.zeros((2, 2)), s3]])
    assert np.allclose(sig[1, 2], expected, atol=1e-14)
    for mu, nu in itertools.product(range(4), repeat=2):
        assert abs(np.trace(sig[mu, nu])) < 1e-14
        assert np.allclose(sig[mu, nu], -sig[nu, mu])


def test_charge_conjugation_blocks_and_inverse():
    c = alg.charge_conjugation_chiral()
    th = alg.wigner_theta()
    assert np.allclose(c[:2, 2:], 1j * th)
    assert np.allclose(c[2:, :2], -1j * th)
    assert np.allclose(c[:2, :2], 0) and np.allclose(c[2:, 2:], 0)
    assert np.allclose(c @ np.linalg.inv(c), np.eye(4))


@pytest.mark.parametrize("rep", REPS)
def test_charge_conjugation_flips_conjugated_gammas(rep):
    ids = alg.conjugation_identities(rep)
    assert ids["C gamma* C^-1 = -gamma"] < 1e-12
    assert ids["C C^dagger = 1"] < 1e-12


def test_charge_conjugation_is_minus_identity_in_majorana_basis():
    assert np.allclose(alg.charge_conjugation_matrix("majorana"), -np.eye(4), atol=1e-14)


def test_printed_similarity_law_for_c_fails_because_u_commutes_with_c():
    u = alg.majorana_unitary()
    c = alg.charge_conjugation_chiral()
    assert np.allclose(u @ c, c @ u)
    assert alg.max_norm(u @ c @ np.linalg.inv(u) + c) == pytest.approx(2.0)


def test_constants_unitary():
    assert alg.is_unitary(alg.wigner_theta())
    assert alg.is_unitary(alg.wigner_xi(0.37))
    assert alg.is_unitary(alg.majorana_unitary())
    assert alg.is_unitary(alg.dirac_unitary())


def test_majorana_unitary_prefactor_needs_no_rescaling():
    assert np.allclose(alg.majorana_unitary(normalize=False), alg.majorana_unitary())


def test_conformal_generators_count_and_closure():
    gens = alg.conformal_generators(alg.build_gammas())
    assert len(gens) == 15
    assert alg.generator_rank(gens.values()) == 15
    assert alg.closure_residual(gens.values()) < 1e-10


def test_conformal_generator_rejects_equal_indices():
    with pytest.raises(ValueError):
        alg.conformal_generator(alg.build_gammas(), 2, 2)


def test_generator_with_scalar_slot():
    gs = alg.build_gammas()
    assert np.allclose(alg.conformal_generator(gs, 0, 5), -gs.gammas[0] / 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4))
def test_slash_squares_to_p_squared(p):
    gs = alg.build_gammas("majorana")
    ps = alg.slash(gs, p)
    p2 = p[0] ** 2 - p[1] ** 2 - p[2] ** 2 - p[3] ** 2
    assert np.allclose(ps @ ps, p2 * np.eye(4), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(REPS), st.sampled_from(REPS))
def test_representations_related_by_unitary_similarity(r1, r2):
    g1, g2 = alg.build_gammas(r1), alg.build_gammas(r2)
    w = alg.basis_change(r2) @ alg.basis_change(r1).conj().T
    for a, b in zip(g1.gammas, g2.gammas):
        assert np.allclose(w @ a @ w.conj().T, b, atol=1e-12)
