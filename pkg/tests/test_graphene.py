import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from weylbarrier.errors import RegimeError
from weylbarrier.graphene import (
    HBAR_VF_EV_NM,
    GrapheneConfig,
    angle_identities,
    angular_map,
    chiral_ratio,
    device_units,
    energy_map,
    general_transmission,
    refraction_angle,
    transmission_graphene,
    width_map,
)
from weylbarrier.kinematics import Regime
from weylbarrier.steps import alpha_factor

angles = st.floats(-1.5, 1.5)


@st.composite
def propagating(draw):
    E = draw(st.floats(0.2, 20.0))
    V0 = draw(st.floats(0.0, 5.0)) * E
    phi = draw(angles)
    L = draw(st.floats(0.01, 50.0))
    v_F = draw(st.sampled_from([1.0, 0.5, HBAR_VF_EV_NM]))
    cfg = GrapheneConfig(E, V0, phi, L, v_F)
    assume(cfg.regime in (Regime.DIFFUSION, Regime.KLEIN))
    # keep away from the zone edges and from grazing refraction
    assume(abs(cfg.kinematics.q1.real) > 1e-3 * E / v_F)
    return cfg


def test_device_units():
    u = device_units()
    assert u["hbar"] == 1.0
    assert u["c"] == pytest.approx(0.6582119569, rel=1e-9)
    assert HBAR_VF_EV_NM == pytest.approx(u["c"], rel=1e-15)


def test_angle_must_be_open_interval():
    with pytest.raises(ValueError):
        GrapheneConfig(1.0, 0.0, math.pi / 2, 1.0)


def test_refraction_angle_sign():
    assert refraction_angle(GrapheneConfig(3.0, 1.0, 0.4, 1.0)) > 0
    assert refraction_angle(GrapheneConfig(3.0, 1.0, -0.4, 1.0)) < 0


def test_evanescent_is_rejected():
    with pytest.raises(RegimeError):
        transmission_graphene(GrapheneConfig(1.2, 1.0, 1.0, 1.0))


@given(propagating())
def test_reduces_to_general_formula(cfg):
    assert abs(transmission_graphene(cfg).T - general_transmission(cfg)) < 1e-12


@given(propagating())
def test_angle_identities(cfg):
    lhs, rhs = angle_identities(cfg)
    for a, b in zip(lhs, rhs):
        assert abs(a - b) < 1e-12 * max(1.0, abs(b))


@given(propagating())
def test_chiral_ratio_is_K(cfg):
    kin = cfg.kinematics
    a = alpha_factor(kin).alpha
    K = (1 + abs(a) ** 2) / (2 * a.real)
    assert abs(chiral_ratio(kin) - K) < 1e-10 * max(1.0, abs(K))


@given(propagating())
def test_klein_values_are_flagged(cfg):
    res = transmission_graphene(cfg)
    assert res.formal == (res.regime is Regime.KLEIN)
    assert 0 <= res.T <= 1 + 1e-12


@given(st.floats(0.2, 20.0), st.floats(0.0, 5.0), st.floats(0.01, 50.0))
def test_head_on_family(E, frac, L):
    V0 = frac * E
    assume(abs(E - V0) > 1e-6 * E)
    assert abs(transmission_graphene(GrapheneConfig(E, V0, 0.0, L)).T - 1) < 1e-12


@pytest.mark.parametrize("n", range(1, 8))
def test_width_resonance_family(n):
    E, V0, phi = 3.0, 1.2, 0.6
    q1 = GrapheneConfig(E, V0, phi, 1.0).kinematics.q1.real
    cfg = GrapheneConfig(E, V0, phi, n * math.pi / q1)
    assert abs(transmission_graphene(cfg).T - 1) < 1e-12


def test_angular_map_tags_cells():
    phis = np.linspace(-1.5, 1.5, 61)
    m = angular_map(1.0, 1.5, 3.0, phis)
    assert m.T.shape == (1, 61)
    tags = set(m.regime.ravel())
    assert "Klein" in tags and "Evanescent" in tags
    ev = m.regime == "Evanescent"
    assert np.all(np.isnan(m.T[ev]))
    assert np.all(m.formal[m.regime == "Klein"])
    recs = list(m.records())
    assert len(recs) == 61 and recs[30]["phi"] == 0.0 and recs[30]["T"] == pytest.approx(1.0)


def test_energy_and_width_maps():
    phis = np.linspace(-1.0, 1.0, 5)
    em = energy_map([2.0, 3.0, 4.0], 1.0, 2.0, phis)
    assert em.T.shape == (3, 5) and em.axis_name == "E"
    assert {r["E"] for r in em.records()} == {2.0, 3.0, 4.0}
    wm = width_map([1.0, 2.0], 3.0, 1.0, phis)
    assert wm.T.shape == (2, 5) and wm.axis_name == "L"
    assert {r["L"] for r in wm.records()} == {1.0, 2.0}
    np.testing.assert_allclose(wm.T[1], em.T[1], rtol=1e-15)


def test_device_unit_map_matches_natural_units():
    # rescaling c only rescales momenta, so |t|^2 is unchanged when L is in the matching unit
    c = device_units()["c"]
    a = transmission_graphene(GrapheneConfig(0.08, 0.2, 0.3, 100.0, v_F=c)).T
    b = transmission_graphene(GrapheneConfig(0.08, 0.2, 0.3, 100.0 / c)).T
    assert a == pytest.approx(b, rel=1e-12)
