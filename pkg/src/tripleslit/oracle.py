"""Brute-force evaluation of the path integrals by numerical quadrature.

Nothing here uses Gaussian closure: kernels, apertures and the source packet
are sampled pointwise and every intermediate coordinate is integrated on a
grid. The integrals are nested one coordinate at a time, so the 4D looping
path costs four dense matrix-vector products. The chain engine is consulted
only to place each grid where the integrand lives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gchain
from .classical import classical_chain
from .nonclassical import nonclassical_chain
from .params import ExperimentConfig, estimate_epsilon

MAX_NODES_4D = 1025


class ConvergenceError(RuntimeError):
    """Quadrature did not settle under node doubling."""


@dataclass(frozen=True)
class QuadratureSpec:
    half_width: float = 8.0  # in local packet widths
    nodes: int = 513
    rule: str = "trapezoid"  # or "gauss-legendre"
    rtol: float = 1e-6

    def __post_init__(self):
        if self.nodes % 2 == 0 or self.nodes < 3:
            raise ValueError("node count must be odd and >= 3")
        if self.half_width < 6:
            raise ValueError("window half-width must be at least 6 local widths")
        if self.rule not in ("trapezoid", "gauss-legendre"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(self.half_width, 2 * self.nodes - 1, self.rule, self.rtol)


def _nodes(center: float, width: float, spec: QuadratureSpec):
    h = spec.half_width * width
    if spec.rule == "trapezoid":
        x = np.linspace(center - h, center + h, spec.nodes)
        w = np.full(spec.nodes, x[1] - x[0])
        w[0] = w[-1] = 0.5 * (x[1] - x[0])
        return x, w
    u, w = np.polynomial.legendre.leggauss(spec.nodes)
    return center + h * u, h * w


def _kernel(y, x, duration, m, hbar, with_prefactor=True):
    """Free propagator K(y, x; T) sampled on the outer product of two grids."""
    diff = y[:, None] - x[None, :]
    k = np.exp(1j * m * diff * diff / (2.0 * hbar * duration))
    if with_prefactor:
        k = k * np.sqrt(m / (2j * np.pi * hbar * duration))
    return k


def _aperture(x, center, width):
    return np.exp(-((x - center) ** 2) / (2.0 * width**2))


def _window(state: gchain.GaussianState):
    return gchain.packet_center(state), gchain.packet_width(state)


def _classical_once(cfg, slit_center, x, spec):
    m, hb = cfg.m, cfg.hbar
    x0, w0 = _nodes(0.0, cfg.sigma0, spec)
    psi0 = np.exp(-x0**2 / (2 * cfg.sigma0**2)) / math.sqrt(cfg.sigma0 * math.sqrt(math.pi))

    ref = gchain.propagate(gchain.source_packet(cfg.sigma0), cfg.t, m, hb)
    ref = gchain.apply_slit(ref, slit_center, cfg.beta)
    x1, w1 = _nodes(*_window(ref), spec)
    f1 = _kernel(x1, x0, cfg.t, m, hb) @ (psi0 * w0)
    f1 = f1 * _aperture(x1, slit_center, cfg.beta)
    return _kernel(np.atleast_1d(x), x1, cfg.tau, m, hb) @ (f1 * w1)


def _nonclassical_once(cfg, eps, x, spec, centers):
    m, hb = cfg.m, cfg.hbar
    hop = 2.0 * eps
    x0, w0 = _nodes(0.0, cfg.sigma0, spec)
    f = np.exp(-x0**2 / (2 * cfg.sigma0**2)) / math.sqrt(cfg.sigma0 * math.sqrt(math.pi))
    grid, weights = x0, w0

    ref = gchain.source_packet(cfg.sigma0)
    # "shared": one sqrt(m / 4 pi i hbar eps) = sqrt(m / 2 pi i hbar (2 eps)) for both hops,
    # so only the first hop carries a prefactor
    stages = [(cfg.t, True), (hop, True), (hop, cfg.hop_prefactor == "composed")]
    for (duration, pref), center in zip(stages, centers):
        ref = gchain.propagate(ref, duration, m, hb)
        ref = gchain.apply_slit(ref, center, cfg.beta)
        nxt, nw = _nodes(*_window(ref), spec)
        kern = _kernel(nxt, grid, duration, m, hb, with_prefactor=pref)
        f = (kern @ (f * weights)) * _aperture(nxt, center, cfg.beta)
        grid, weights = nxt, nw
    return _kernel(np.atleast_1d(x), grid, cfg.tau, m, hb) @ (f * weights)


def _converged(fn, spec: QuadratureSpec):
    coarse = fn(spec)
    fine = fn(spec.refined())
    scale = np.max(np.abs(fine))
    err = np.max(np.abs(fine - coarse)) / scale if scale > 0 else 0.0
    if err > spec.rtol:
        raise ConvergenceError(f"node doubling changed the result by {err:.2e} (rtol {spec.rtol:.0e})")
    return fine


def quad_classical(cfg: ExperimentConfig, slit_center: float, x, spec: QuadratureSpec | None = None,
                   check: bool = True):
    """psi(x) for the straight path through ``slit_center``, by nested quadrature over x0, x_j."""
    spec = spec or QuadratureSpec()
    fn = lambda s: _classical_once(cfg, slit_center, x, s)  # noqa: E731
    out = _converged(fn, spec) if check else fn(spec)
    return out if np.ndim(x) else out[0]


def quad_nonclassical(cfg: ExperimentConfig, x, epsilon: float | None = None,
                      spec: QuadratureSpec | None = None, check: bool = True,
                      reverse: bool = False):
    """psi_nc(x) by nested quadrature over x0, x1, x2, x3 with hops of 2*epsilon."""
    spec = spec or QuadratureSpec()
    nodes = spec.refined().nodes if check else spec.nodes
    if nodes > MAX_NODES_4D:
        raise ValueError(f"{nodes}^4 quadrature nodes exceeds the {MAX_NODES_4D}^4 limit")
    eps = estimate_epsilon(cfg) if epsilon is None else epsilon
    centers = (cfg.d, 0.0, -cfg.d)
    if reverse:
        centers = centers[::-1]
    fn = lambda s: _nonclassical_once(cfg, eps, x, s, centers)  # noqa: E731
    out = _converged(fn, spec) if check else fn(spec)
    return out if np.ndim(x) else out[0]


def closed_form_classical(cfg, slit_center, x):
    return gchain.evaluate(classical_chain(cfg, slit_center), x)


def closed_form_nonclassical(cfg, x, epsilon=None, reverse=False):
    return gchain.evaluate(nonclassical_chain(cfg, epsilon, reverse=reverse), x)
