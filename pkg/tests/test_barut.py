from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barut_kit import barut as br
from barut_kit.algebra import build_gammas
from barut_kit.polyop import PolyOperator

GS = build_gammas()
rng_momenta = np.random.default_rng(11).normal(size=(25, 4))


def masses(states):
    return [s.mass for s in states]


def test_dirac_limit_operator_and_determinant():
    op = br.barut_operator(br.CanonicalParams(0.0, 1.3))
    for p in rng_momenta[:5]:
        p2 = p[0] ** 2 - p[1:] @ p[1:]
        assert np.linalg.det(op(p)) == pytest.approx((p2 - 1.69) ** 2, rel=1e-9, abs=1e-9)


def test_operator_at_zero_momentum():
    op = br.barut_operator(br.CanonicalParams(0.7, 0.4))
    assert np.allclose(op([0, 0, 0, 0]), -0.4 * np.eye(4))


def test_determinant_roots_of_half_split():
    op = br.barut_operator(br.param_map(br.BarutParams(1.0, 0.5, 1.0)))
    ns = br.numeric_spectrum(op)
    assert masses(ns) == pytest.approx([0.5, 1.5], rel=1e-12)


def test_second_order_spectrum_examples():
    dirac = br.second_order_spectrum(br.BarutParams(1.0, 0.0, 1.0))
    assert [(s.mass, s.multiplicity) for s in dirac] == [(1.0, 8)]
    split = br.second_order_spectrum(br.BarutParams(1.0, 0.5, 1.0))
    assert masses(split) == pytest.approx([0.5, 1.5])
    edge = br.second_order_spectrum(br.BarutParams(2.0, 1.0, 1.0))
    assert masses(edge) == pytest.approx([0.0, 1.0])
    assert edge[0].warning == "massless root" and edge[1].warning is None


def test_factorization_of_second_order_operator():
    p = br.BarutParams(1.0, 0.5, 1.0)
    assert br.second_order_operator(p).distance(-br.factorized_second_order(p)) < 1e-14


def test_param_map_examples():
    assert br.param_map(br.BarutParams(1.0, 0.0, 1.0)) == br.CanonicalParams(0.5, 0.5)
    assert br.param_map(br.BarutParams(1.0, 1.0, 2.5)).kappa == 0.0


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 3), st.floats(0, 0.99), st.floats(0.1, 10))
def test_param_map_round_trip(a, b, m):
    p = br.BarutParams(a, b, m)
    back = br.inverse_param_map(br.param_map(p), m)
    assert back.a == pytest.approx(a, rel=1e-12)
    assert back.b == pytest.approx(b, rel=1e-9, abs=1e-7)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 3), st.floats(0.01, 0.99), st.floats(0.1, 10))
def test_closed_form_matches_root_finding(a, b, m):
    p = br.BarutParams(a, b, m)
    closed = br.second_order_spectrum(p)
    op = br.second_order_operator(p)
    numeric = br.numeric_spectrum(op)
    assert len(closed) == len(numeric)
    for c, n in zip(closed, numeric):
        assert n.mass == pytest.approx(c.mass, rel=1e-8)
        assert br.on_shell_null_count(op, c.mass, [0.3, -0.1, 0.2]) == 4


def test_degenerate_point_algebraic_and_geometric_counts():
    op = br.second_order_operator(br.BarutParams(1.0, 0.0, 1.0))
    ns = br.numeric_spectrum(op)
    assert [(s.mass, s.multiplicity) for s in ns] == [(pytest.approx(1.0, rel=1e-12), 8)]
    assert br.on_shell_null_count(op, 1.0, [0.0, 0.0, 0.4]) == 4


def test_invalid_params():
    with pytest.raises(ValueError):
        br.BarutParams(0.0, 0.5)
    with pytest.raises(ValueError):
        br.BarutParams(1.0, 0.5, -1.0)


def test_alpha2_physical_values():
    assert br.alpha2_physical(1.0, 1.5) == pytest.approx(1 / 3, rel=1e-15)
    assert br.alpha2_physical(1.0, 1 / 137.03) == pytest.approx(0.00481823219060926546, rel=1e-14)
    assert br.alpha2_physical(1.0, 1e-12) < 1e-12
    with pytest.raises(ValueError):
        br.alpha2_physical(1.0, 0.0)


def test_lepton_masses():
    assert br.muon_mass(0.511, 1 / 137.03) == pytest.approx(105.544495, rel=1e-14)
    assert br.muon_mass(1.0, 1.5) == pytest.approx(2.0)
    assert br.muon_mass(0.511, 1e12) == pytest.approx(0.511, rel=1e-9)
    assert br.tau_mass(0.511, 1 / 137.03) == pytest.approx(1786.080415, rel=1e-14)
    assert br.tau_mass(0.511, 1e12) == pytest.approx(0.511, rel=1e-9)
    assert br.tau_mass(0.511, 1 / 137.03, (1,)) == br.muon_mass(0.511, 1 / 137.03)
    table = br.lepton_table(137.0359895, 0.511)
    assert table["tau"] == pytest.approx(1786.15846117975, rel=1e-13)


@pytest.mark.parametrize("branch", sorted(br.BRANCHES))
def test_third_order_expansion_every_branch(branch):
    res = br.third_order_operator(br.BarutParams(1.0, b1=0.3, b2=0.2), branch)
    assert res.expansion_residual < 1e-12
    assert res.product.distance(res.first_factor @ res.second_factor) == 0


def test_third_order_three_masses():
    res = br.third_order_operator(br.BarutParams(1.0, b1=0.3, b2=0.2, m=1.0), "++")
    assert masses(res.spectrum) == pytest.approx([0.7, 1.3, 1.5], rel=1e-14)
    numeric = br.numeric_spectrum(res.product)
    assert masses(numeric) == pytest.approx([0.7, 1.3, 1.5], rel=1e-10)


def test_third_order_b2_zero_collapses_to_two_masses():
    res = br.third_order_operator(br.BarutParams(1.0, b1=0.3, b2=0.0), "++")
    assert masses(res.spectrum) == pytest.approx([0.7, 1.3])


def test_branch_parsing():
    assert br.parse_branch("+-") == (1, -1)
    assert br.branch_label((-1, 1)) == "-+"
    with pytest.raises(ValueError):
        br.parse_branch("+0")


@pytest.mark.parametrize("sign", [1, -1])
def test_coupled_system_reduces_to_third_order(sign):
    p = br.BarutParams(1.2, b1=0.3, b2=0.2, m=0.9)
    cs = br.coupled_system(p, sign)
    assert cs.decoupling_residual < 1e-14
    for label, op in cs.third_order.items():
        target = br.third_order_operator(p, label).product
        _, spread = br.determinant_ratio_spread(op, target, rng_momenta)
        assert spread < 1e-10


def test_coupled_system_without_gamma5_term_decouples_into_split_pair():
    p = br.BarutParams(1.0, b1=0.4, b2=0.0)
    cs = br.coupled_system(p)
    d = br.dirac_factor(p)
    assert cs.psi1_operator.distance(d - 0.4) < 1e-14
    assert cs.psi2_operator.distance(d + 0.4) < 1e-14


def test_coupled_system_no_couplings_pure_dirac():
    cs = br.coupled_system(br.BarutParams(2.0, m=1.0))
    spectrum = br.numeric_spectrum(cs.third_order["++"])
    assert masses(spectrum) == pytest.approx([0.5])


def test_field_equation_pair_dirac():
    lagr = br.LagrangianParams(0.5j, 0.0, 0.0, 1.0)
    op, conj = br.field_equation_pair(lagr)
    assert op.as_tuple() == (1j, 0, -1.0)
    assert (conj.c_box, conj.c_const) == (0, 1.0)
    # i gamma.d - m on exp(-ipx) is pslash - m
    dirac = PolyOperator.slash(GS) - 1.0
    assert op.momentum(GS).distance(dirac) < 1e-15


def test_field_equation_pair_barut_signs():
    lagr = br.LagrangianParams(0.5j, 0.3, 0.2, 0.9)
    op, conj = br.field_equation_pair(lagr)
    assert (op.c_box, op.c_const) == (-0.3, -0.9)
    assert (conj.c_box, conj.c_const) == (0.3, 0.9)
