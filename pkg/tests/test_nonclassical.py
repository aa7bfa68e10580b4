import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripleslit import gchain
from tripleslit.classical import build_classical_path, classical_chain, decompose
from tripleslit.nonclassical import (ZChain, build_nonclassical_path, build_zchain, gouy_nc,
                                     gouy_nc_scan, nc_closed_forms, nonclassical_chain,
                                     nonclassical_paths, unwrap_gouy)
from tripleslit.params import ExperimentConfig, estimate_epsilon

configs = st.builds(
    ExperimentConfig,
    sigma0=st.floats(30e-9, 200e-9), beta=st.floats(30e-9, 200e-9), d=st.floats(100e-9, 2e-6),
    t=st.floats(1e-9, 40e-9), tau=st.floats(0.5e-9, 40e-9),
    epsilon=st.one_of(st.none(), st.floats(0.05e-9, 5e-9)))


def test_reference_gouy_phase(cfg):
    p = build_nonclassical_path(cfg.with_(tau=2e-9))
    assert abs(p.mu) == pytest.approx(0.719, abs=0.02)
    assert -math.pi / 4 <= p.mu < math.pi / 4


def test_records_hop_conventions(cfg):
    p = build_nonclassical_path(cfg)
    assert p.t_tilde == pytest.approx(cfg.t + 4 * estimate_epsilon(cfg))
    assert p.linear_sign == +1
    assert any("2*epsilon" in n for n in p.notes)
    hops = [s.duration for s in p.state.log if s.kind == "propagate"][1:3]
    assert hops == [2 * p.epsilon, 2 * p.epsilon]


@given(cfg=configs)
@settings(max_examples=100)
def test_zchain_matches_chain_gouy(cfg):
    p = build_nonclassical_path(cfg)
    mu_z = gouy_nc(build_zchain(cfg))
    assert abs(gchain.principal_gouy(p.mu_tracked - mu_z)) < 1e-8


@given(cfg=configs)
@settings(max_examples=50)
def test_zchain_are_chain_denominators(cfg):
    zc = build_zchain(cfg)
    dens = [s.denominator for s in nonclassical_chain(cfg).log if s.denominator is not None]
    for z, den in zip(zc.z[:4], dens):
        assert abs(z - den) <= 1e-10 * abs(den)
    composite = 1j * np.conj(np.prod(zc.z[:4]))
    assert abs(complex(zc.z_r, zc.z_i) - composite) <= 1e-10 * abs(composite)


def test_composed_convention_shifts_gouy_by_eighth_turn(cfg):
    shared = build_nonclassical_path(cfg)
    composed = build_nonclassical_path(cfg.with_(hop_prefactor="composed"))
    assert composed.mu_tracked - shared.mu_tracked == pytest.approx(-math.pi / 4, abs=1e-12)


@pytest.mark.parametrize("tau", [2e-9, 15e-9])
def test_closed_forms_match_chain(cfg, tau):
    cfg = cfg.with_(tau=tau)
    cf = nc_closed_forms(cfg)
    p = build_nonclassical_path(cfg)
    for name in ("amp", "c1", "c2", "c3", "gamma", "theta"):
        assert getattr(cf, name) == pytest.approx(getattr(p, name), rel=1e-8), name
    assert cf.repaired["alpha_quad"] == pytest.approx(p.alpha_quad, rel=1e-12)
    assert math.isnan(cf.alpha_quad)


def test_decomposition_reassembles_chain(cfg):
    p = build_nonclassical_path(cfg)
    w = gchain.packet_width(p.state)
    x = np.linspace(-3 * w, 3 * w, 11)
    np.testing.assert_allclose(p.evaluate(x), gchain.evaluate(p.state, x), rtol=1e-9)


def test_mirror_loop_is_parity_image(cfg):
    paths = nonclassical_paths(cfg.with_(mirror_loop=True))
    assert len(paths) == 2
    x = np.linspace(-3e-5, 3e-5, 13)
    np.testing.assert_allclose(paths[1].evaluate(x), paths[0].evaluate(-x), rtol=1e-12)
    assert len(nonclassical_paths(cfg)) == 1


def test_collapsed_loop_is_narrow_slit(cfg):
    # d = 0 and vanishing hops: three coincident apertures act as one of width beta/sqrt(3)
    cfg = cfg.with_(d=1e-9, hop_prefactor="composed")
    loop = nonclassical_chain(cfg.with_(d=1e-30), epsilon=1e-22)
    slit = classical_chain(cfg, 0.0, beta=cfg.beta / math.sqrt(3))
    x = np.linspace(-5e-5, 5e-5, 11)
    np.testing.assert_allclose(gchain.evaluate(loop, x), gchain.evaluate(slit, x), rtol=1e-6)


def test_collapse_needs_short_hops(cfg):
    cfg = cfg.with_(hop_prefactor="composed")
    loop = nonclassical_chain(cfg.with_(d=1e-30), epsilon=estimate_epsilon(cfg))
    slit = classical_chain(cfg, 0.0, beta=cfg.beta / math.sqrt(3))
    x = np.linspace(-5e-5, 5e-5, 11)
    err = np.max(np.abs(gchain.evaluate(loop, x) / gchain.evaluate(slit, x) - 1))
    assert err > 1e-3


def test_invalid_epsilon(cfg):
    with pytest.raises(ValueError):
        nonclassical_chain(cfg, epsilon=0.0)
    with pytest.raises(ValueError):
        build_zchain(cfg, epsilon=-1e-9)


def test_gouy_nc_branch_point_warns():
    zc = ZChain(z=(), z_r=0.0, z_i=1.0, epsilon=1e-9)
    with pytest.warns(RuntimeWarning):
        assert gouy_nc(zc) == pytest.approx(math.pi / 4)


def test_unwrap_removes_quarter_turn_jumps():
    smooth = np.linspace(-0.6, -1.2, 40)
    wrapped = gchain.principal_gouy(smooth)
    assert np.max(np.abs(np.diff(wrapped))) > 1
    np.testing.assert_allclose(unwrap_gouy(wrapped), smooth + (wrapped[0] - smooth[0]), atol=1e-12)


def test_gouy_scan_continuous(cfg):
    mu = gouy_nc_scan(cfg, np.linspace(0.5e-9, 20e-9, 50))
    assert np.max(np.abs(np.diff(mu))) < 0.1


def test_loop_decomposes_with_plus_sign(cfg):
    state = nonclassical_chain(cfg)
    p = decompose(state, +1)
    assert p.c2 == pytest.approx(state.b.real)
    assert build_classical_path(cfg, cfg.d).linear_sign == -1
