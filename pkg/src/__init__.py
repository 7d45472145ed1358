"""regfm - regularized factorization method for noisy far-field data.

Shape reconstruction of penetrable scatterers with spectral regularization
filters, plus a randomized harness that checks the perturbation estimates
behind the method's stability.
"""

from src.version import __version__

__all__ = ["__version__"]
