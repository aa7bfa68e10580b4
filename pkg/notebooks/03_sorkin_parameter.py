"""
The Sorkin parameter and the Gouy ablation
==========================================
"""

import numpy as np

from tripleslit import ExperimentConfig, gouy_percentage_error, kappa_scan
from tripleslit.sorkin import build_paths, direct_kappa, kappa_surface

cfg = ExperimentConfig()
x = np.linspace(-1e-3, 1e-3, 2001)

with_gouy = kappa_scan(cfg, x, use_gouy=True)
without = kappa_scan(cfg, x, use_gouy=False)
print("max |kappa|        %.3e" % np.abs(with_gouy.kappa).max())
print("kappa(0) with/without Gouy: %.4e  %.4e" % (with_gouy.kappa[1000], without.kappa[1000]))

# the cross-term expansion against a high-precision direct |sum psi|^2
paths = build_paths(cfg)
xs = np.linspace(-5e-5, 5e-5, 5)
print(kappa_scan(cfg, xs).kappa)
print(direct_kappa(paths, xs, dps=40))

for tau in (1e-9, 2e-9, 5e-9, 15e-9):
    print("tau = %4.1f ns  percentage error %.2f%%" % (tau * 1e9, gouy_percentage_error(cfg, tau)))
print("all constant phases removed: %.2f%%"
      % gouy_percentage_error(cfg, 2e-9, "all-constant-phases"))

# |kappa| over (tau, x); its largest value sits just off x = 0 near tau = 0.6 ns
taus = np.linspace(0.5e-9, 20e-9, 200)
surf = np.abs(kappa_surface(cfg, x, taus, threads=4))
i, j = np.unravel_index(surf.argmax(), surf.shape)
print("max |kappa| = %.3e at x = %.1f um, tau = %.3f ns" % (surf[i, j], x[j] * 1e6, taus[i] * 1e9))
