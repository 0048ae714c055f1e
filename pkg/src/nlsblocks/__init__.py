"""Exact toolkit for the normal-form blocks of the cubic NLS on a torus.

Modules: polycore (polynomials, determinants, resultants), graphs (colored
marked graphs), realization (sites and geometric realizations), blocks
(block matrices), certify (irreducibility, separation, real roots),
genericity (constraints and resonance lists), melnikov (non-resonance
checks) and cli.
"""

__version__ = "0.1.0"

from .certificate import FAIL, INCONCLUSIVE, PASS, Certificate  # noqa: E402
from .realization import SiteList  # noqa: E402

__all__ = ["Certificate", "PASS", "FAIL", "INCONCLUSIVE", "SiteList", "__version__"]
