"""fnc-galois - Frobenius nonclassical plane curves and their Galois points."""

__version__ = "0.1.0"
__author__ = "FNC Galois Contributors"
__description__ = "Construct (q^n, q^m)-Frobenius nonclassical curves and certify their Galois points"
