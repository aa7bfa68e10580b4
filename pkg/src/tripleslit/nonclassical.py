"""The looping path source -> slit(+d) -> slit(0) -> slit(-d) -> detector.

Two independent routes give its Gouy phase: the chain engine
(:func:`build_nonclassical_path`) and the explicit z-recursion
(:func:`build_zchain`), which integrates out x0..x3 one at a time.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gchain
from .classical import PathWavefunction, decompose
from .params import ExperimentConfig, estimate_epsilon

HOP_NOTES = (
    "each inter-slit hop lasts 2*epsilon (exponent i m dx^2 / 4 hbar epsilon)",
    "elapsed time to the last slit recorded as t + 4*epsilon",
)


@dataclass(frozen=True)
class NcPathWavefunction(PathWavefunction):
    """Looping-path wavefunction; linear terms enter with a + sign."""

    epsilon: float = 0.0
    t_tilde: float = 0.0
    hop_prefactor: str = "shared"
    notes: tuple = ()


def nonclassical_chain(cfg: ExperimentConfig, epsilon: float | None = None,
                       tau: float | None = None, reverse: bool = False,
                       centers: tuple[float, float, float] | None = None) -> gchain.GaussianState:
    eps = estimate_epsilon(cfg) if epsilon is None else epsilon
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    tau = cfg.tau if tau is None else tau
    if centers is None:
        centers = (cfg.d, 0.0, -cfg.d)
    if reverse:
        centers = centers[::-1]
    m, hb = cfg.m, cfg.hbar
    state = gchain.source_packet(cfg.sigma0)
    state = gchain.propagate(state, cfg.t, m, hb)
    state = gchain.apply_slit(state, centers[0], cfg.beta)
    state = gchain.propagate(state, 2 * eps, m, hb)
    state = gchain.apply_slit(state, centers[1], cfg.beta)
    state = gchain.propagate(state, 2 * eps, m, hb)
    state = gchain.apply_slit(state, centers[2], cfg.beta)
    if cfg.hop_prefactor == "shared":
        # one sqrt(m / 4 pi i hbar eps) for both hops instead of the product of two kernels
        log_fix = 0.5 * math.log(4 * math.pi * hb * eps / m) + 1j * math.pi / 4
        state = gchain.scale_log(state, log_fix, "single two-hop prefactor")
    return gchain.propagate(state, tau, m, hb)


def build_nonclassical_path(cfg: ExperimentConfig, epsilon: float | None = None,
                            reverse: bool = False) -> NcPathWavefunction:
    eps = estimate_epsilon(cfg) if epsilon is None else epsilon
    state = nonclassical_chain(cfg, eps, reverse=reverse)
    notes = HOP_NOTES + (f"hop prefactor convention: {cfg.hop_prefactor}",)
    return decompose(state, +1, 0.0, cls=NcPathWavefunction, epsilon=eps,
                     t_tilde=cfg.t + 4 * eps, hop_prefactor=cfg.hop_prefactor, notes=notes)


def nonclassical_paths(cfg: ExperimentConfig, epsilon: float | None = None) -> tuple[NcPathWavefunction, ...]:
    """The modelled loop, plus its mirror image when ``cfg.mirror_loop`` is set."""
    paths = (build_nonclassical_path(cfg, epsilon),)
    if cfg.mirror_loop:
        paths += (build_nonclassical_path(cfg, epsilon, reverse=True),)
    return paths


# --- z-recursion -------------------------------------------------------------

@dataclass(frozen=True)
class ZChain:
    z: tuple[complex, ...]  # z0 .. z6
    z_r: float
    z_i: float
    epsilon: float

    def __getitem__(self, k):
        return self.z[k]


def build_zchain(cfg: ExperimentConfig, epsilon: float | None = None,
                 tau: float | None = None) -> ZChain:
    """Evaluate the z0..z6 recursion and the composite (z_R, z_I), component by component."""
    eps = estimate_epsilon(cfg) if epsilon is None else epsilon
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    tau = cfg.tau if tau is None else tau
    m, hb, s0, be, t = cfg.m, cfg.hbar, cfg.sigma0, cfg.beta, cfg.t

    def mod2(r, i):
        v = r * r + i * i
        if v == 0 or not math.isfinite(v):
            raise gchain.DegenerateCurvatureError("|z_k|^2 underflowed")
        return v

    z0r = 1 / (2 * s0**2)
    z0i = -m / (2 * hb * t)
    n0 = mod2(z0r, z0i)
    z1r = 1 / (2 * be**2) + m**2 * z0r / (4 * hb**2 * t**2 * n0)
    z1i = -(m / (4 * hb * eps) + m / (2 * hb * t) + m**2 * z0i / (4 * hb**2 * t**2 * n0))
    n1 = mod2(z1r, z1i)
    z2r = 1 / (2 * be**2) + m**2 * z1r / (16 * hb**2 * eps**2 * n1)
    z2i = -(m / (2 * hb * eps) + m**2 * z1i / (16 * hb**2 * eps**2 * n1))
    n2 = mod2(z2r, z2i)
    z3r = 1 / (2 * be**2) + m**2 * z2r / (16 * hb**2 * eps**2 * n2)
    z3i = -(m / (2 * hb * tau) + m / (4 * hb * eps) + m**2 * z2i / (16 * hb**2 * eps**2 * n2))
    mod2(z3r, z3i)

    z4r = z1r**2 * z2r - z1i**2 * z2r - 2 * z1r * z1i * z2i
    z4i = z1r**2 * z2i - z1i**2 * z2i + 2 * z1r * z1i * z2r
    sym = (z1r**2 * z2r**2 - z1r**2 * z2i**2 - z1i**2 * z2r**2 + z1i**2 * z2i**2
           - 4 * z1r * z1i * z2r * z2i)
    mixed = (z1r**2 * z2r * z2i - z1i**2 * z2r * z2i + z1r * z1i * z2r**2 - z1r * z1i * z2i**2)
    z5r = z3r * sym - 2 * z3i * mixed
    z5i = z3i * sym + 2 * z3r * mixed
    z6r = z1r * z2r * z3r - z1r * z2i * z3i - z1i * z2r * z3i - z1i * z2i * z3r
    z6i = z1r * z2r * z3i + z1r * z2i * z3r + z1i * z2r * z3r - z1i * z2i * z3i

    pr, pi_ = z0r * z1r - z0i * z1i, z0r * z1i + z0i * z1r
    qr, qi = z2r * z3r - z2i * z3i, z2r * z3i + z2i * z3r
    z_r = pr * qi + pi_ * qr
    z_i = pr * qr - pi_ * qi
    if z_r == 0 and z_i == 0:
        raise gchain.DegenerateCurvatureError("z_R = z_I = 0")
    zs = tuple(complex(r, i) for r, i in ((z0r, z0i), (z1r, z1i), (z2r, z2i), (z3r, z3i),
                                           (z4r, z4i), (z5r, z5i), (z6r, z6i)))
    return ZChain(zs, z_r, z_i, eps)


def gouy_nc(z: ZChain) -> float:
    """mu_nc = arctan(z_I / z_R) / 2 on the principal branch."""
    if z.z_r == 0:
        warnings.warn("z_R = 0: arctan branch point", RuntimeWarning, stacklevel=2)
        return math.copysign(math.pi / 4, z.z_i)
    return 0.5 * math.atan(z.z_i / z.z_r)


def unwrap_gouy(mu):
    """Remove pi/2 jumps of a principal-branch Gouy phase sampled along a scan."""
    return np.unwrap(np.asarray(mu, dtype=float), period=np.pi / 2)


def gouy_nc_scan(cfg: ExperimentConfig, taus, epsilon: float | None = None) -> np.ndarray:
    """mu_nc over a tau scan, continuous along the scan."""
    mu = [gouy_nc(build_zchain(cfg, epsilon, tau)) for tau in np.atleast_1d(taus)]
    return unwrap_gouy(mu)


@dataclass(frozen=True)
class NcClosedForms:
    """Closed-form looping-path coefficients from the z-recursion (cross-check only)."""

    amp: float
    c1: float
    c2: float
    c3: float
    alpha_quad: float
    gamma: float
    theta: float
    mu: float
    unreliable: frozenset = frozenset()
    repaired: dict = field(default_factory=dict)


def nc_closed_forms(cfg: ExperimentConfig, zc: ZChain | None = None,
                             tau: float | None = None) -> NcClosedForms:
    """Literal closed-form A_nc ... theta_nc. A_nc assumes the single two-hop prefactor."""
    tau = cfg.tau if tau is None else tau
    zc = build_zchain(cfg, tau=tau) if zc is None else zc
    m, hb, s0, be, d, t, e = cfg.m, cfg.hbar, cfg.sigma0, cfg.beta, cfg.d, cfg.t, zc.epsilon
    z1, z3, z4, z5, z6 = zc[1], zc[3], zc[4], zc[5], zc[6]

    def re(z):
        return z.real / abs(z) ** 2

    def im(z):
        return z.imag / abs(z) ** 2

    amp = math.sqrt(m**3 * math.sqrt(math.pi)
                    / (16 * hb**3 * tau * t * e * s0 * math.hypot(zc.z_r, zc.z_i)))
    c1 = m**2 * re(z3) / (4 * hb**2 * tau**2)
    c2 = (m**3 * d * im(z6) / (32 * hb**3 * be**2 * tau * e**2)
          + m * d * im(z3) / (2 * hb * tau * be**2))
    gamma = (m**3 * d * re(z6) / (32 * hb**3 * be**2 * tau * e**2)
             + m * d * re(z3) / (2 * hb * tau * be**2))

    def offset(part):
        return (d**2 / (4 * be**4) * part(z1)
                - m**2 * d**2 / (64 * be**4 * hb**2 * e**2) * part(z4)
                + m**4 * d**2 / (4**5 * hb**4 * be**4 * e**4) * part(z5)
                + m**2 * d**2 / (32 * be**4 * e**2 * hb**2) * part(z6)
                + d**2 / (4 * be**4) * part(z3))

    return NcClosedForms(
        amp=amp, c1=c1, c2=c2, c3=offset(re) - d**2 / be**2,
        alpha_quad=math.nan, gamma=gamma, theta=offset(im), mu=gouy_nc(zc),
        unreliable=frozenset({"alpha_quad"}),
        # literal leading term carries a stray x^2
        repaired={"alpha_quad": m / (2 * hb * tau) + m**2 * im(z3) / (4 * hb**2 * tau**2)},
    )
