"""Exact-arithmetic toolkit for Saito-Kurokawa lifts of level-1 newforms,
the even-weight genus-2 Siegel modular form ring, and prime-power congruences
between lifts and non-lift eigenforms, including the L-value criterion that
predicts them.

Everything upstream of the final L-value step is exact (rationals or a real
quadratic field); the L-value step is high-precision numerics followed by
rational reconstruction, so its output is exact again.
"""

__version__ = "0.1.0"
