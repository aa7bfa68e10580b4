"""Gaussian matter waves through a triple slit, with one looping path.

Closed-form path wavefunctions come from chaining exact Gaussian operations
(:mod:`tripleslit.gchain`); :mod:`tripleslit.oracle` checks them by direct
quadrature. :mod:`tripleslit.sorkin` turns them into intensities, the Sorkin
parameter kappa and the Gouy-phase ablation.
"""
from .classical import PathWavefunction, build_classical_path, classical_paths
from .gchain import GaussianState, gouy_of, principal_gouy
from .nonclassical import ZChain, build_nonclassical_path, build_zchain, gouy_nc
from .params import ConfigError, ExperimentConfig, derived_scales, estimate_epsilon, reference_config
from .sorkin import (build_paths, gouy_percentage_error, gouy_scan, intensity, kappa_scan,
                     kappa_surface)

__version__ = "0.1.0"
