"""Straight-through paths: source -> one slit -> detector."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gchain
from .gchain import GaussianState
from .params import ExperimentConfig


@dataclass(frozen=True)
class PathWavefunction:
    """A path wavefunction split into magnitude and phase coefficients.

    psi(x) = amp * exp(-c1 x^2 + s c2 x + c3)
                 * exp(i (alpha_quad x^2 + s gamma x - theta + mu + quarter_turns pi/2))

    with s = ``linear_sign`` (-1 for the straight-through paths, +1 for the
    looping path). ``mu`` is the Gouy phase on the principal arctan branch;
    the whole quarter turns removed by that reduction are kept in
    ``quarter_turns`` so the product is still the exact wavefunction.
    """

    amp: float
    c1: float
    c2: float
    c3: float
    alpha_quad: float
    gamma: float
    theta: float
    mu: float
    slit_center: float = 0.0
    quarter_turns: int = 0
    linear_sign: int = -1
    mu_tracked: float = 0.0
    state: GaussianState | None = field(default=None, compare=False, repr=False)

    def magnitude(self, x):
        x = np.asarray(x, dtype=float)
        return self.amp * np.exp(-self.c1 * x * x + self.linear_sign * self.c2 * x + self.c3)

    def phase(self, x, gouy: bool = True):
        """Phase of psi(x); ``gouy=False`` drops mu (the quarter-turn residue stays)."""
        x = np.asarray(x, dtype=float)
        ph = (self.alpha_quad * x * x + self.linear_sign * self.gamma * x - self.theta
              + self.quarter_turns * (np.pi / 2))
        return ph + self.mu if gouy else ph

    def evaluate(self, x):
        return self.magnitude(x) * np.exp(1j * self.phase(x))


def decompose(state: GaussianState, linear_sign: int, slit_center: float = 0.0,
              cls=PathWavefunction, **extra) -> PathWavefunction:
    """Read the magnitude/phase coefficients off a chain state."""
    src = state.log[0].source
    log_amp = gchain.log_amplitude(state)
    mu_tracked = gchain.gouy_of(state)
    mu = gchain.principal_gouy(mu_tracked)
    quarter = int(round((mu_tracked - mu) / (math.pi / 2)))
    return cls(
        amp=math.exp(log_amp),
        c1=state.a.real,
        c2=linear_sign * state.b.real,
        c3=state.c.real - log_amp,
        alpha_quad=-state.a.imag,
        gamma=linear_sign * state.b.imag,
        theta=mu_tracked - (state.c.imag - src[2].imag),
        mu=mu,
        slit_center=slit_center,
        quarter_turns=quarter,
        linear_sign=linear_sign,
        mu_tracked=mu_tracked,
        state=state,
        **extra,
    )


def classical_chain(cfg: ExperimentConfig, slit_center: float, tau: float | None = None,
                    beta: float | None = None) -> GaussianState:
    tau = cfg.tau if tau is None else tau
    beta = cfg.beta if beta is None else beta
    state = gchain.source_packet(cfg.sigma0)
    state = gchain.propagate(state, cfg.t, cfg.m, cfg.hbar)
    state = gchain.apply_slit(state, slit_center, beta)
    return gchain.propagate(state, tau, cfg.m, cfg.hbar)


def build_classical_path(cfg: ExperimentConfig, slit_center: float) -> PathWavefunction:
    """Path through the slit centred at ``slit_center``: propagate t, slit, propagate tau."""
    return decompose(classical_chain(cfg, slit_center), -1, slit_center)


def classical_paths(cfg: ExperimentConfig) -> tuple[PathWavefunction, PathWavefunction, PathWavefunction]:
    """(psi1, psi2, psi3) for slits at +d, 0 and -d.

    psi1 is the +d slit: with the sign conventions of the closed forms its
    linear coefficient c2 is negative, i.e. the packet sits at positive x.
    """
    return (build_classical_path(cfg, cfg.d), build_classical_path(cfg, 0.0),
            build_classical_path(cfg, -cfg.d))


# --- literal closed forms ----------------------------------------------------

@dataclass(frozen=True)
class ClassicalClosedForms:
    """Closed-form classical coefficients, evaluated literally.

    Coefficients listed in ``unreliable`` are dimensionally inconsistent as
    written; their literal value is NaN and ``repaired`` holds the form that
    the chain engine confirms.
    """

    amp: float
    c1: float
    c2: float
    c3: float
    alpha_quad: float
    gamma: float
    theta: float
    mu: float
    script_a: float
    script_b: float
    unreliable: frozenset = frozenset()
    repaired: dict = field(default_factory=dict)


def closed_form_mu_c(cfg: ExperimentConfig, tau=None):
    """mu_c = -1/2 arctan[(t + tau(1 + s0^2/b^2)) / (tau0 (1 - t tau s0^2 / tau0^2 b^2))].

    Vectorised over ``tau``; warns when the arctan denominator changes sign
    inside the scan (the principal branch jumps there).
    """
    tau = np.asarray(cfg.tau if tau is None else tau, dtype=float)
    tau0 = cfg.m * cfg.sigma0**2 / cfg.hbar
    r = cfg.sigma0**2 / cfg.beta**2
    num = cfg.t + tau * (1.0 + r)
    den = tau0 * (1.0 - cfg.t * tau * r / tau0**2)
    if den.size > 1 and np.any(np.diff(np.sign(den)) != 0):
        warnings.warn("mu_c arctan denominator changes sign within the scan; "
                      "principal branch jumps by pi/2", RuntimeWarning, stacklevel=2)
    mu = -0.5 * np.arctan(num / den)
    return float(mu) if mu.ndim == 0 else mu


def classical_closed_forms(cfg: ExperimentConfig) -> ClassicalClosedForms:
    m, hb, s0, be, d, t, tau = cfg.m, cfg.hbar, cfg.sigma0, cfg.beta, cfg.d, cfg.t, cfg.tau
    amp = (m / (2 * hb * math.sqrt(math.sqrt(math.pi) * t * tau * s0))
           * ((m**2 / (4 * hb**2 * t * tau) - 1 / (4 * be**2 * s0**2)) ** 2
              + m**2 / (16 * hb**2) * (1 / (be**2 * t) + 1 / (s0**2 * t) + 1 / (s0**2 * tau)) ** 2)
           ** -0.25)
    sa = 1 / (2 * be**2) + m**2 * s0**2 / (2 * (hb**2 * t**2 + m**2 * s0**4))
    sb = (m**3 * s0**4 / (2 * hb * t * (hb**2 * t**2 + m**2 * s0**4))
          - m / (2 * hb * t) - m / (2 * hb * tau))
    q = 4 * (sa**2 + sb**2)
    c1 = (m**2 / (hb**2 * tau**2)) * sa / q
    c2 = (2 * m * d / (hb * tau * be**2)) * sb / q
    gamma = 2 * d * hb * tau / (m * be**2) * c1
    theta = hb * tau * d / (2 * m * be**2) * c2
    repaired = {
        # literal form has beta^2 where beta^4 is needed for a dimensionless offset
        "c3": -d**2 / (2 * be**2) + hb**2 * tau**2 * d**2 / (m**2 * be**4) * c1,
        # literal leading term carries a stray x^2
        "alpha_quad": m / (2 * hb * tau) + (m**2 / (hb**2 * tau**2)) * sb / q,
    }
    return ClassicalClosedForms(
        amp=amp, c1=c1, c2=c2, c3=math.nan, alpha_quad=math.nan, gamma=gamma, theta=theta,
        mu=closed_form_mu_c(cfg), script_a=sa, script_b=sb,
        unreliable=frozenset({"c3", "alpha_quad"}), repaired=repaired,
    )
