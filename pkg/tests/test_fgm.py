from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barut_kit import fgm
from barut_kit.algebra import build_gammas, sigma_tensor
from barut_kit.barut import CanonicalParams
from barut_kit.spinors import HELICITIES, dirac_u

GS = build_gammas()
F_GENERIC = np.array([[0, .3, -.2, .1], [-.3, 0, .5, -.4], [.2, -.5, 0, .6], [-.1, .4, -.6, 0]])
FIELDS = {
    "zero": fgm.EMField(),
    "constant": fgm.EMField("constant", (0.3, -0.2, 0.5, 0.1), e=0.7),
    "constant_f": fgm.EMField.constant_field(F_GENERIC, c=(0.1, 0.2, 0.3, 0.4), e=0.9),
}


def on_shell(pvec, m):
    return np.array([np.sqrt(np.dot(pvec, pvec) + m * m), *pvec])


def test_free_operator_kills_on_shell_plane_waves():
    p = on_shell([0.2, -0.1, 0.4], 1.3)
    psi = fgm.PolyWave.monomial(p, (0, 0, 0, 0), [1, 2j, 0, -1])
    assert fgm.fgm_apply(FIELDS["zero"], 1.3, psi).norm() < 1e-12


def test_constant_potential_shifts_momentum():
    field_ = FIELDS["constant"]
    p = np.array([1.1, 0.2, -0.3, 0.5])
    w = np.array([0.5, 1j, -0.2, 0.3])
    psi = fgm.PolyWave.monomial(p, (0, 0, 0, 0), w)
    out = fgm.fgm_apply(field_, 0.8, psi)
    g = np.diag([1.0, -1, -1, -1])
    k = g @ p - field_.e * np.asarray(field_.c)  # lower-index p - eA
    expected = (k @ g @ k - 0.64) * w
    assert np.allclose(out.coeffs[(0, 0, 0, 0)], expected)


@pytest.mark.parametrize("family", sorted(FIELDS))
def test_squared_dirac_identity(family):
    assert fgm.squared_dirac_identity(FIELDS[family]) < 1e-10


def test_magnetic_field_sigma_term():
    field_ = fgm.EMField.magnetic(0.8, e=1.0)
    sig = sigma_tensor(GS)
    # sigma^{mu nu} F_mu_nu with only F_12 = -F_21 = B
    assert np.allclose(fgm.sigma_f(field_), 2 * 0.8 * sig[1, 2])
    assert fgm.squared_dirac_identity(field_) < 1e-12


@pytest.mark.parametrize("family", sorted(FIELDS))
def test_symbolic_expansion_oracle(family):
    pts = np.random.default_rng(2).normal(size=(3, 4))
    err = fgm.symbolic_squared_dirac(FIELDS[family], (1, 0, 1, 0), [1, 0.5j, 0, -1],
                                     (1.25, 0.5, -0.25, 0.75), pts)
    assert err < 1e-10


@pytest.mark.parametrize("family", sorted(FIELDS))
def test_gamma5_commutant(family):
    rep = fgm.gamma5_structure(FIELDS[family], 1.1)
    assert rep.commutator < 1e-12
    assert rep.projected_residual < 1e-10


def test_field_validation():
    with pytest.raises(ValueError):
        fgm.EMField("linear")
    with pytest.raises(ValueError):
        fgm.EMField("constant", F=F_GENERIC)
    with pytest.raises(ValueError):
        fgm.EMField("constant_f", F=np.ones((4, 4)))
    with pytest.raises(ValueError):
        fgm.EMField("zero", c=(1, 0, 0, 0))


def test_potential_reproduces_field_strength():
    assert FIELDS["constant_f"].field_strength_residual([0.3, 0.1, -0.2, 0.5]) < 1e-9


def test_polywave_derivative_matches_finite_difference():
    psi = fgm.PolyWave.monomial([1.2, 0.3, -0.4, 0.1], (1, 0, 2, 0), [1, 1j, 0, 2])
    x = np.array([0.3, -0.2, 0.5, 0.1])
    h = 1e-6
    for mu in range(4):
        dx = np.zeros(4)
        dx[mu] = h
        fd = (psi(x + dx) - psi(x - dx)) / (2 * h)
        assert np.allclose(psi.d(mu)(x), fd, atol=1e-7)


def test_free_lagrangian_values():
    m = 1.4
    p = on_shell([0.3, 0.2, -0.1], m)
    u = dirac_u([0.3, 0.2, -0.1], 0.5, m).components
    psi = fgm.PolyWave.monomial(p, (0, 0, 0, 0), u)
    x = np.array([0.2, 0.7, -0.3, 1.1])
    on = fgm.free_fgm_lagrangian(psi, m, x)
    assert abs(on) < 1e-12
    zero = fgm.PolyWave(p)
    assert fgm.free_fgm_lagrangian(zero, m, x) == 0
    # mass mismatch: (p^2 - m^2) psibar psi with p^2 = m'^2
    m2 = 1.7
    p2 = on_shell([0.3, 0.2, -0.1], m2)
    psi2 = fgm.PolyWave.monomial(p2, (0, 0, 0, 0), u)
    pbar = u.conj() @ GS.gammas[0] @ u
    assert fgm.free_fgm_lagrangian(psi2, m, x) == pytest.approx((m2 ** 2 - m ** 2) * pbar)


def test_decomposition_dirac_limit():
    dec = fgm.barut_decomposition(CanonicalParams(0.0, 1.3), 1.3)
    assert dec.lambda2 == 0 and dec.lambda1 == 1
    assert dec.kappa_d == Fraction(1.3)
    assert dec.residual == 0


def test_decomposition_kappa_zero():
    dec = fgm.barut_decomposition(CanonicalParams(0.5, 0.0), 1.0)
    assert dec.lambda1 == 1 and dec.lambda2 == Fraction(-1, 2)
    assert dec.kappa_d == Fraction(1, 2)
    assert dec.residual == 0


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 10))
def test_decomposition_exact(alpha2, kappa, m):
    canon = CanonicalParams(alpha2, kappa)
    dec = fgm.barut_decomposition(canon, m)
    assert dec.residual == 0
    assert dec.lambda1 == 1
    assert dec.lambda2 == -Fraction(alpha2) * Fraction(m)
    assert fgm.decomposition_operator_residual(canon, m) < 1e-9 * max(1.0, abs(alpha2) * m * m, abs(kappa))


def test_decompose_leaves_gamma5_in_residual():
    target = fgm.SlashPolynomial(Fraction(1), Fraction(1), Fraction(0), Fraction(3, 7))
    assert fgm.decompose(target, 1.0).residual == Fraction(3, 7)


def test_dirac_current_and_zero_transfer():
    p = on_shell([0.1, 0.2, 0.3], 1.0)
    u = dirac_u([0.1, 0.2, 0.3], 0.5, 1.0).components
    j = fgm.general_current(fgm.GeneralCurrentParams(1.0, 0.0, 0.0), p, p, u, u)
    assert j[0].real > 0
    j3 = fgm.general_current(fgm.GeneralCurrentParams(0.0, 0.0, 1.0), p, p, u, u)
    assert np.allclose(j3, 0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=6, max_size=6), st.floats(0.3, 3),
       st.sampled_from(HELICITIES), st.sampled_from(HELICITIES))
def test_gordon_decomposition(ks, m, h, hp):
    k1, k2 = ks[:3], ks[3:]
    p1, p2 = on_shell(k1, m), on_shell(k2, m)
    u1, u2 = dirac_u(k1, h, m).components, dirac_u(k2, hp, m).components
    direct = fgm.general_current(fgm.GeneralCurrentParams(1, 0, 0), p1, p2, u1, u2)
    gordon = fgm.general_current(fgm.gordon_params(m), p1, p2, u1, u2)
    assert np.allclose(direct, gordon, atol=1e-9)
    assert abs(fgm.continuity(direct, p2 - p1)) < 1e-9
