"""
Path wavefunctions on the detector
==================================

Build the three straight-through paths and the looping path for the
reference electron setup and look at where each one lands.
"""

import numpy as np

from tripleslit import ExperimentConfig, build_paths, estimate_epsilon
from tripleslit import gchain

cfg = ExperimentConfig()
print("inter-slit time epsilon = %.4f ns" % (estimate_epsilon(cfg) * 1e9))

paths = build_paths(cfg)
for name, p in zip(("psi1 (+d)", "psi2 (0)", "psi3 (-d)", "loop"), paths.all):
    print("%-10s centre %+8.3f um  width %6.2f um  |psi| at 0 = %.3e" % (
        name, gchain.packet_center(p.state) * 1e6, gchain.packet_width(p.state) * 1e6,
        p.magnitude(0.0)))

# The loop is many orders of magnitude weaker than a straight path.
x = np.linspace(-60e-6, 60e-6, 7)
print(np.abs(paths.nc[0].evaluate(x)) / np.abs(paths.psi2.evaluate(x)))

# Each path remembers how it was built; replaying the log gives the same state.
state = paths.psi1.state
for step in state.log:
    print(step.kind, step.duration, step.center)
assert gchain.replay(state.log, cfg.m, cfg.hbar).coefficients == state.coefficients
