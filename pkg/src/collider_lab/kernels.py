"""Standard-normal kernels used throughout the package.

The dichotomized-treatment algebra reduces to three scalar functions of the
standard normal law: the CDF ``Phi``, the density ``phi``, and the scaling
factor

    eta(alpha) = phi(alpha) / (Phi(alpha) * Phi(-alpha)),

which converts latent-scale covariances into mean differences across the
threshold ``alpha``.  For a standard bivariate normal pair (X1, X2) with
correlation r,

    E(X1 | X2 >= z) - E(X1 | X2 < z) = r * eta(z),

exposed here as :func:`truncated_normal_diff`.

``std_normal_cdf`` is evaluated through the complementary error function in
the form Phi(x) = erfc(-x / sqrt(2)) / 2, which avoids cancellation in the
tails; the C library erfc is accurate to a few ulp, far inside the 1e-14
absolute-error budget the rest of the package assumes (the test suite checks
this against a 40-digit reference).  eta is supported on |alpha| <= 8, where
both Phi(alpha) and Phi(-alpha) are comfortably above double-precision
underflow.
"""

import math

from .errors import DomainError, RangeError

__all__ = ["std_normal_cdf", "std_normal_pdf", "eta", "truncated_normal_diff", "ALPHA_MAX"]

# Threshold range over which eta is certified; beyond it the complementary
# CDF factor loses relative precision faster than any scenario here needs.
ALPHA_MAX = 8.0

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _require_finite(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF ``Phi(x)``.

    Raises :class:`DomainError` for non-finite input.  Output lies in [0, 1].
    """
    x = _require_finite("x", x)
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_pdf(x: float) -> float:
    """Standard normal density ``phi(x)``.

    Raises :class:`DomainError` for non-finite input.
    """
    x = _require_finite("x", x)
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def eta(alpha: float) -> float:
    """Threshold scaling factor ``phi(alpha) / (Phi(alpha) * Phi(-alpha))``.

    Even in ``alpha``, strictly positive, with minimum eta(0) = 4 * phi(0)
    = 1.5957691...  Raises :class:`RangeError` when |alpha| > 8 and
    :class:`DomainError` for non-finite input.
    """
    alpha = _require_finite("alpha", alpha)
    if abs(alpha) > ALPHA_MAX:
        raise RangeError(f"eta is supported on |alpha| <= {ALPHA_MAX:g}, got {alpha!r}")
    return std_normal_pdf(alpha) / (std_normal_cdf(alpha) * std_normal_cdf(-alpha))


def truncated_normal_diff(r: float, z: float) -> float:
    """Mean gap ``E(X1 | X2 >= z) - E(X1 | X2 < z)`` for correlation ``r``.

    (X1, X2) is standard bivariate normal with correlation r; the gap equals
    ``r * eta(z)`` exactly.  Raises :class:`DomainError` when |r| > 1 or any
    input is non-finite, and :class:`RangeError` when |z| > 8.
    """
    r = _require_finite("r", r)
    if abs(r) > 1.0:
        raise DomainError(f"correlation r must lie in [-1, 1], got {r!r}")
    return r * eta(z)
