"""
Gouy phases along the flight time
=================================

mu_c and mu_nc from the chain engine, compared with the closed-form mu_c
and with the z-recursion for the looping path.
"""

import numpy as np

from tripleslit import ExperimentConfig
from tripleslit.classical import build_classical_path, closed_form_mu_c
from tripleslit.nonclassical import build_nonclassical_path, build_zchain, gouy_nc
from tripleslit.sorkin import gouy_scan

cfg = ExperimentConfig()
taus = np.linspace(1e-9, 15e-9, 15)

scan = gouy_scan(cfg, taus)
print(" tau/ns     mu_c     mu_nc   closed mu_c")
for tau, mc, mn, ref in zip(taus, scan.mu_c, scan.mu_nc, closed_form_mu_c(cfg, taus)):
    print("%6.1f  %+8.5f  %+8.5f  %+8.5f" % (tau * 1e9, mc, mn, ref))

# |mu_c| shrinks while |mu_nc| grows toward pi/4
print(np.all(np.diff(np.abs(scan.mu_c)) < 0), np.all(np.diff(np.abs(scan.mu_nc)) > 0))

# At tau = 2 ns
two = cfg.with_(tau=2e-9)
print("mu_c  =", build_classical_path(two, 0.0).mu)
print("mu_nc =", build_nonclassical_path(two).mu, " z-recursion:", gouy_nc(build_zchain(two)))

# The other hop-prefactor convention moves mu_nc by an eighth of a turn.
print("composed:", build_nonclassical_path(two.with_(hop_prefactor="composed")).mu)
