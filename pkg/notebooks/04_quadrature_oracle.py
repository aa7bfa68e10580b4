"""
Checking the closed forms by brute force
========================================

Direct nested quadrature of the propagator integrals, with no Gaussian
closure, against the chain engine.
"""

import numpy as np

from tripleslit import ExperimentConfig
from tripleslit.oracle import (QuadratureSpec, closed_form_classical, closed_form_nonclassical,
                               quad_classical, quad_nonclassical)

cfg = ExperimentConfig()
x = np.linspace(-80e-6, 80e-6, 11)

for centre in (cfg.d, 0.0, -cfg.d):
    q = quad_classical(cfg, centre, x)
    c = closed_form_classical(cfg, centre, x)
    print("slit %+.0f nm: max rel diff %.2e" % (centre * 1e9, np.max(np.abs(q / c - 1))))

for conv in ("shared", "composed"):
    c2 = cfg.with_(hop_prefactor=conv)
    q = quad_nonclassical(c2, x, spec=QuadratureSpec(nodes=257))
    c = closed_form_nonclassical(c2, x)
    print("loop (%s): max rel diff %.2e" % (conv, np.max(np.abs(q / c - 1))))

# Gauss-Legendre nodes reach the same answer with fewer points
q = quad_classical(cfg, 0.0, x, QuadratureSpec(nodes=129, rule="gauss-legendre"))
print(np.max(np.abs(q / closed_form_classical(cfg, 0.0, x) - 1)))
