"""Weight-graded rational homotopy of formal spaces, over exact rationals.

The input is a finite-dimensional graded-commutative algebra (a cohomology
ring).  The output is the tower of weight-graded homotopy groups of the
associated formal homotopy type, together with the spectral sequence of the
weight filtration, character supports, Hurewicz data, and an independent
Sullivan-style cross-check.
"""

__version__ = "0.1.0"
