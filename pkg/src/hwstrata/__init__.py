"""Monte Carlo census machinery for p-ranks of hyperelliptic curves.

Core layers: exact finite-field and polynomial arithmetic, Hasse-Witt /
Cartier-Manin p-rank computation, two samplers over the moduli of genus-g
hyperelliptic curves (a coefficient-box family and fully-split branch
configurations), a zeta-function oracle for cross-checks, and the campaign
driver that turns per-stratum frequencies into component-count estimates.
"""

from .errors import HwstrataError

__all__ = ["HwstrataError"]
__version__ = "0.1.0"
