"""sl(n)-like knot Floer invariants and Khovanov-Rozansky complexes, computed exactly over Q."""
from .ring import LaurentPoly, MultiPoly, parse_laurent, parse_poly

__all__ = ["LaurentPoly", "MultiPoly", "parse_laurent", "parse_poly"]
__version__ = "0.1.0"
