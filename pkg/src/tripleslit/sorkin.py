"""Intensities, relative phases and the Sorkin parameter kappa.

kappa * I0 = I_nc - I_c, expanded as |psi_nc|^2 plus one cross term
2 |psi_j| |psi_nc| cos(phi_j,nc) per straight-through path. The phase
decomposition lets the Gouy difference mu_c - mu_nc be switched off on its
own, which is how its weight in kappa is measured.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .classical import PathWavefunction, classical_paths
from .nonclassical import nonclassical_paths, unwrap_gouy
from .params import ExperimentConfig

ABLATIONS = ("gouy-only", "all-constant-phases")


@dataclass(frozen=True)
class PathSet:
    psi1: PathWavefunction
    psi2: PathWavefunction
    psi3: PathWavefunction
    nc: tuple

    @property
    def classical(self):
        return (self.psi1, self.psi2, self.psi3)

    @property
    def all(self):
        return self.classical + tuple(self.nc)


@dataclass(frozen=True)
class SorkinResult:
    """Detector-line record; array fields are indexed like ``x``.

    The phases refer to the first (modelled) looping path. ``I_nc`` is
    I_c + kappa * I0, so with ``use_gouy=False`` it is the ablated intensity.
    """

    x: np.ndarray
    I_c: np.ndarray
    I_nc: np.ndarray
    kappa: np.ndarray
    phi1nc: np.ndarray
    phi2nc: np.ndarray
    phi3nc: np.ndarray
    I0: float
    tau: float
    use_gouy: bool = True


def build_paths(cfg: ExperimentConfig, epsilon: float | None = None) -> PathSet:
    psi1, psi2, psi3 = classical_paths(cfg)
    return PathSet(psi1, psi2, psi3, nonclassical_paths(cfg, epsilon))


def intensity(paths, x):
    """|sum of psi(x)|^2 over the given paths."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape, dtype=complex)
    for p in paths:
        total = total + p.evaluate(x)
    return np.abs(total) ** 2


def relative_phase(p: PathWavefunction, nc: PathWavefunction, x, use_gouy: bool = True,
                   ablation: str = "gouy-only"):
    """arg(p(x) conj(nc(x))) written coefficient by coefficient.

    Differences of coefficients are formed before multiplying by x^2, since
    the individual quadratic phases are ~1e6 rad on a millimetre screen.
    """
    if ablation not in ABLATIONS:
        raise ValueError(f"ablation must be one of {ABLATIONS}")
    x = np.asarray(x, dtype=float)
    theta_nc = nc.theta if (use_gouy or ablation == "gouy-only") else 0.0
    phase = ((p.alpha_quad - nc.alpha_quad) * x * x
             + (p.linear_sign * p.gamma - nc.linear_sign * nc.gamma) * x
             - (p.theta - theta_nc)
             + (p.quarter_turns - nc.quarter_turns) * (np.pi / 2))
    if use_gouy:
        phase = phase + (p.mu - nc.mu)
    return phase


def relative_phases(paths: PathSet, x, use_gouy: bool = True, ablation: str = "gouy-only"):
    """(phi1nc, phi2nc, phi3nc) against the modelled looping path."""
    nc = paths.nc[0]
    return tuple(relative_phase(p, nc, x, use_gouy, ablation) for p in paths.classical)


def central_intensity(paths: PathSet) -> float:
    i0 = float(intensity(paths.classical, 0.0))
    if not i0 > 0:
        raise ZeroDivisionError("classical intensity vanishes at x = 0; kappa is undefined")
    return i0


def kappa_from_paths(paths: PathSet, x, use_gouy: bool = True, ablation: str = "gouy-only",
                     tau: float = math.nan) -> SorkinResult:
    x = np.asarray(x, dtype=float)
    i0 = central_intensity(paths)
    i_c = intensity(paths.classical, x)
    delta = intensity(paths.nc, x)
    for nc in paths.nc:
        mag_nc = nc.magnitude(x)
        for p in paths.classical:
            phi = relative_phase(p, nc, x, use_gouy, ablation)
            delta = delta + 2.0 * p.magnitude(x) * mag_nc * np.cos(phi)
    phis = relative_phases(paths, x, use_gouy, ablation)
    return SorkinResult(x=x, I_c=i_c, I_nc=i_c + delta, kappa=delta / i0,
                        phi1nc=phis[0], phi2nc=phis[1], phi3nc=phis[2],
                        I0=i0, tau=tau, use_gouy=use_gouy)


def direct_kappa(paths: PathSet, x, dps: int | None = None):
    """(|sum all psi|^2 - |sum classical psi|^2) / I0 without the phase decomposition.

    In double precision the subtraction cancels about -log10|kappa| digits.
    With ``dps`` the wavefunctions are rebuilt from their chain coefficients
    and summed in mpmath at that many decimal digits.
    """
    if dps is None:
        return (intensity(paths.all, x) - intensity(paths.classical, x)) / central_intensity(paths)
    import mpmath

    with mpmath.workdps(dps):
        def psi(p, xv):
            a, b, c = (mpmath.mpc(v) for v in p.state.coefficients)
            return mpmath.exp(-a * xv * xv + b * xv + c)

        def sums(xv):
            xv = mpmath.mpf(float(xv))
            cl = sum((psi(p, xv) for p in paths.classical), mpmath.mpc(0))
            nc = sum((psi(p, xv) for p in paths.nc), mpmath.mpc(0))
            return cl, cl + nc

        cl0, _ = sums(0.0)
        i0 = abs(cl0) ** 2
        flat = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        out = []
        for xv in flat:
            cl, tot = sums(xv)
            out.append(float((abs(tot) ** 2 - abs(cl) ** 2) / i0))
    out = np.array(out).reshape(np.shape(x))
    return float(out) if out.ndim == 0 else out


def _map(fn, items, threads: int):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def kappa_scan(cfg: ExperimentConfig, x, taus=None, use_gouy: bool = True,
               ablation: str = "gouy-only", threads: int = 1):
    """kappa(x) at ``cfg.tau``, or a list of results, one per entry of ``taus``."""
    if taus is None or np.ndim(taus) == 0:
        tau = cfg.tau if taus is None else float(taus)
        return kappa_from_paths(build_paths(cfg.with_(tau=tau)), x, use_gouy, ablation, tau)
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0 or np.size(x) == 0:
        raise ValueError("scan grids must be nonempty")
    return _map(lambda tau: kappa_scan(cfg, x, float(tau), use_gouy, ablation), taus, threads)


def kappa_surface(cfg: ExperimentConfig, x, taus, use_gouy: bool = True,
                  ablation: str = "gouy-only", threads: int = 1) -> np.ndarray:
    """kappa on the (tau, x) grid, shape (len(taus), len(x))."""
    rows = kappa_scan(cfg, x, np.atleast_1d(taus), use_gouy, ablation, threads)
    return np.array([r.kappa for r in rows])


def percentage_error(kappa: float, kappa_ablated: float) -> float:
    """||kappa| - |kappa'|| / |kappa| in percent."""
    if kappa == 0:
        raise ZeroDivisionError("kappa = 0: percentage error undefined")
    return abs(abs(kappa) - abs(kappa_ablated)) / abs(kappa) * 100.0


def gouy_percentage_error(cfg: ExperimentConfig, tau: float | None = None,
                          ablation: str = "gouy-only") -> float:
    """Relative change of |kappa(0)| when mu_c - mu_nc is deleted from the phases."""
    tau = cfg.tau if tau is None else tau
    paths = build_paths(cfg.with_(tau=tau))
    k = float(kappa_from_paths(paths, 0.0, True).kappa)
    k_ablated = float(kappa_from_paths(paths, 0.0, False, ablation).kappa)
    return percentage_error(k, k_ablated)


@dataclass(frozen=True)
class GouyScan:
    tau: np.ndarray
    mu_c: np.ndarray
    mu_nc: np.ndarray
    kappa0: np.ndarray
    kappa0_ablated: np.ndarray
    percent_error: np.ndarray


def gouy_scan(cfg: ExperimentConfig, taus, ablation: str = "gouy-only",
              threads: int = 1) -> GouyScan:
    """Gouy phases and kappa at x = 0 along a tau scan.

    The principal-branch phases are unwrapped along the scan (ordered pass).
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))

    def point(tau):
        paths = build_paths(cfg.with_(tau=float(tau)))
        k = float(kappa_from_paths(paths, 0.0, True).kappa)
        kp = float(kappa_from_paths(paths, 0.0, False, ablation).kappa)
        return paths.psi2.mu, paths.nc[0].mu, k, kp

    rows = np.array(_map(point, taus, threads), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        pct = np.where(rows[:, 2] != 0,
                       np.abs(np.abs(rows[:, 2]) - np.abs(rows[:, 3])) / np.abs(rows[:, 2]) * 100,
                       np.nan)
    return GouyScan(tau=taus, mu_c=unwrap_gouy(rows[:, 0]), mu_nc=unwrap_gouy(rows[:, 1]),
                    kappa0=rows[:, 2], kappa0_ablated=rows[:, 3], percent_error=pct)

