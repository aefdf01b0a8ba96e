"""Scaled complex error function and small numeric helpers.

These are the numerical bedrock for the expanding-shock correlator and the
space/time form factors: the Faddeeva function w(z) = exp(-z^2) erfc(-iz),
the real complementary error function, and sin(x)/x with its removable
singularity handled.
"""

import math

from scipy import special

__all__ = ["faddeeva", "erfc_real", "sinc"]

# Below this |x| the direct sin(x)/x suffers catastrophic cancellation in the
# deviation from 1; switch to the Taylor polynomial.
_SINC_SMALL = 1e-4


def faddeeva(z: complex) -> complex:
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz), whole complex plane.

    The lower half-plane is routed through the reflection identity
    w(-z) = 2 exp(-z^2) - w(z), which produces the exponentially growing
    branch explicitly instead of trusting the asymptotic evaluation there.
    """
    z = complex(z)
    if z.imag >= 0.0:
        return complex(special.wofz(z))
    # exp(-z^2) grows like exp(Im(z)^2) here; this overflows to inf only when
    # the function value itself is not representable in double precision.
    return 2.0 * _cexp_neg_sq(z) - complex(special.wofz(-z))


def _cexp_neg_sq(z: complex) -> complex:
    """exp(-z^2) for complex z."""
    w = -z * z
    return complex(math.exp(w.real) * math.cos(w.imag),
                   math.exp(w.real) * math.sin(w.imag))


def erfc_real(x: float) -> float:
    """Complementary error function for real argument."""
    return float(special.erfc(x))


def sinc(x: float) -> float:
    """sin(x)/x, exactly 1 at x = 0.

    |x| < 1e-4 uses the 4-term Taylor polynomial to avoid cancellation.
    """
    x = float(x)
    if abs(x) < _SINC_SMALL:
        x2 = x * x
        return 1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0))
    return math.sin(x) / x
