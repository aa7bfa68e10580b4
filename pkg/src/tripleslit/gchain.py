"""Exact algebra of complex Gaussians exp(-a x^2 + b x + c).

Free propagation, Gaussian apertures and constant factors all map this family
onto itself, so every path wavefunction of the triple-slit model is a short
chain of these operations applied to the source packet. Each state carries
the log of the steps that produced it; the argument of the accumulated
kernel prefactors is the Gouy phase.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

_TINY = 1e-300


class DegenerateCurvatureError(ArithmeticError):
    """A complex Gaussian integral has a (numerically) vanishing coefficient."""


class BranchAmbiguityError(ArithmeticError):
    """A single chain step rotates the prefactor phase by pi or more."""


@dataclass(frozen=True)
class ChainStep:
    """One operation of a chain.

    ``log_prefactor`` is the complex log of the constant factor the step
    multiplies into the wavefunction (kernel normalisation for propagation,
    the factor itself for ``scale``). ``denominator`` is a - i k, the
    coefficient of the Gaussian integral done by a propagation step.
    """

    kind: str  # "source" | "propagate" | "slit" | "scale" | "mirror"
    duration: float = 0.0
    center: float = 0.0
    width: float = 0.0
    log_prefactor: complex = 0j
    denominator: complex | None = None
    source: tuple[complex, complex, complex] | None = None
    note: str = ""


@dataclass(frozen=True)
class GaussianState:
    a: complex
    b: complex
    c: complex
    log: tuple[ChainStep, ...] = field(default=(), compare=False, repr=False)

    @property
    def coefficients(self) -> tuple[complex, complex, complex]:
        return self.a, self.b, self.c


def gaussian(a: complex, b: complex = 0j, c: complex = 0j) -> GaussianState:
    """Start a chain from arbitrary coefficients."""
    a, b, c = complex(a), complex(b), complex(c)
    if not a.real > 0:
        raise ValueError("Re(a) must be positive for a normalisable state")
    return GaussianState(a, b, c, (ChainStep("source", source=(a, b, c)),))


def source_packet(sigma0: float) -> GaussianState:
    """Normalised minimum-uncertainty packet exp(-x^2 / 2 sigma0^2) / sqrt(sigma0 sqrt(pi))."""
    return gaussian(1.0 / (2.0 * sigma0**2), 0j, -0.5 * math.log(sigma0 * math.sqrt(math.pi)))


def propagate(state: GaussianState, duration: float, m: float, hbar: float) -> GaussianState:
    """Free evolution for ``duration`` seconds, done by completing the square.

    The kernel sqrt(m / 2 pi i hbar T) exp(i m (x - x')^2 / 2 hbar T) is
    integrated against the state. The factor sqrt(1/i) is applied explicitly
    as exp(-i pi/4) and sqrt(pi / (a - i k)) on the principal branch, which
    is unambiguous because Re(a - i k) = Re(a) > 0.
    """
    if duration < 0:
        raise ValueError("propagation time must be non-negative")
    if duration == 0:
        return state
    k = m / (2.0 * hbar * duration)
    z = state.a - 1j * k
    if abs(z) < _TINY:
        raise DegenerateCurvatureError(f"|a - ik| = {abs(z):.3e} for T = {duration:.3e} s")
    a = -1j * k * state.a / z
    b = -1j * k * state.b / z
    log_pref = 0.5 * (math.log(k) - cmath.log(z)) - 1j * math.pi / 4
    c = state.c + state.b**2 / (4.0 * z) + log_pref
    step = ChainStep("propagate", duration=duration, log_prefactor=log_pref, denominator=z)
    return GaussianState(a, b, c, state.log + (step,))


def apply_slit(state: GaussianState, center: float, width: float) -> GaussianState:
    """Multiply by the aperture exp(-(x - center)^2 / 2 width^2)."""
    if not width > 0:
        raise ValueError("slit width must be positive")
    w2 = width * width
    a = state.a + 1.0 / (2.0 * w2)
    b = state.b + center / w2
    c = state.c - center * center / (2.0 * w2)
    return GaussianState(a, b, c, state.log + (ChainStep("slit", center=center, width=width),))


def scale(state: GaussianState, factor: complex, note: str = "") -> GaussianState:
    """Multiply by a constant. Its phase is booked as part of the Gouy phase."""
    factor = complex(factor)
    if factor == 0:
        raise DegenerateCurvatureError("zero scale factor")
    if factor.real < 0 and factor.imag == 0:
        raise BranchAmbiguityError("negative real factor has no unique half-turn branch")
    return scale_log(state, cmath.log(factor), note)


def scale_log(state: GaussianState, log_factor: complex, note: str = "") -> GaussianState:
    """Multiply by exp(log_factor); lets callers fix the branch of the phase."""
    step = ChainStep("scale", log_prefactor=complex(log_factor), note=note)
    return GaussianState(state.a, state.b, state.c + step.log_prefactor, state.log + (step,))


def mirror(state: GaussianState) -> GaussianState:
    """psi(x) -> psi(-x)."""
    return GaussianState(state.a, -state.b, state.c, state.log + (ChainStep("mirror"),))


def evaluate(state: GaussianState, x):
    x = np.asarray(x, dtype=float)
    return np.exp(-state.a * x * x + state.b * x + state.c)


def log_norm(state: GaussianState) -> float:
    """log of the integral of |psi|^2 over the real line."""
    ar = state.a.real
    if ar <= 0:
        raise DegenerateCurvatureError("state is not normalisable")
    return 2.0 * state.c.real + 0.5 * math.log(math.pi / (2.0 * ar)) + state.b.real**2 / (2.0 * ar)


def norm(state: GaussianState) -> float:
    return math.exp(log_norm(state))


def packet_width(state: GaussianState) -> float:
    """sigma of |psi| written as exp(-(x - x_c)^2 / 2 sigma^2)."""
    return 1.0 / math.sqrt(2.0 * state.a.real)


def packet_center(state: GaussianState) -> float:
    return state.b.real / (2.0 * state.a.real)


def gouy_of(state: GaussianState) -> float:
    """Branch-tracked Gouy phase: summed arguments of all step prefactors.

    Every propagation contributes -pi/4 - arg(a - i k)/2, which lies in
    (-pi/2, 0), so the running sum never needs unwrapping.
    """
    total = 0.0
    for step in state.log:
        phase = step.log_prefactor.imag
        if abs(phase) >= math.pi:
            raise BranchAmbiguityError(f"{step.kind} step rotates phase by {phase:.3f} rad")
        total += phase
    return total


def principal_gouy(mu):
    """Reduce a Gouy phase to [-pi/4, pi/4), the range of arctan(.)/2."""
    mu = np.asarray(mu, dtype=float)
    reduced = mu - (np.pi / 2) * np.floor((mu + np.pi / 4) / (np.pi / 2))
    return float(reduced) if reduced.ndim == 0 else reduced


def log_amplitude(state: GaussianState) -> float:
    """log|source normalisation x kernel prefactors|; excludes the completed-square constants."""
    total = 0.0
    for step in state.log:
        if step.kind == "source":
            total += step.source[2].real
        else:
            total += step.log_prefactor.real
    return total


def width_product(state: GaussianState) -> complex:
    """Product of the Gaussian-integral denominators a - i k along the chain."""
    z = 1 + 0j
    for step in state.log:
        if step.denominator is not None:
            z *= step.denominator
    return z


def replay(log: tuple[ChainStep, ...], m: float, hbar: float) -> GaussianState:
    """Rebuild a state from its chain log."""
    if not log or log[0].kind != "source":
        raise ValueError("chain log must start with a source step")
    state = gaussian(*log[0].source)
    for step in log[1:]:
        if step.kind == "propagate":
            state = propagate(state, step.duration, m, hbar)
        elif step.kind == "slit":
            state = apply_slit(state, step.center, step.width)
        elif step.kind == "mirror":
            state = mirror(state)
        elif step.kind == "scale":
            state = scale_log(state, step.log_prefactor, step.note)
        else:
            raise ValueError(f"unknown step kind {step.kind!r}")
    return state
