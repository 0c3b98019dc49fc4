"""Closed-form asymptotic biases of the unadjusted and adjusted estimators.

The unadjusted estimator is the population OLS coefficient of Y on T alone;
the adjusted estimator controls for the collider M.  In every structure the
true treatment effect is zero, so each coefficient *is* the bias.  The
expressions below are population coefficients of the standardized Gaussian
models defined in :mod:`collider_lab.scenarios`; the SEM engine and the
Monte Carlo sampler provide two independent routes to the same quantities.

Each public function validates its scenario and returns a
:class:`BiasResult`; the bare ``*_value`` helpers evaluate the same
arithmetic on scalars or numpy arrays and carry no validation, which is what
the sweep module uses to rasterize sensitivity surfaces.

Dichotomized-treatment variants scale by eta(alpha) and attenuate the
adjusted denominator by phi(alpha) * eta(alpha); see
:mod:`collider_lab.kernels`.  ``binary_m_adjusted_value`` also exposes a
``paper_literal`` variant carrying a spurious extra factor rho in its
denominator, kept as an auditable negative control: it disagrees with both
the engine and simulation whenever rho is not 0 and is undefined at rho = 0.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .errors import UndefinedEstimatorError, ValidationError
from .scenarios import (
    BinaryButterflyScenario,
    BinaryMScenario,
    ButterflyScenario,
    MScenario,
    Scenario,
    WtoTScenario,
    validate,
)

__all__ = [
    "BiasResult",
    "Estimator",
    "Method",
    "m_bias",
    "m_bias_ratio",
    "butterfly_bias",
    "binary_m_bias",
    "binary_butterfly_bias",
    "w_to_t_bias",
    "bias",
    "bias_ratio",
    "m_unadjusted_value",
    "m_adjusted_value",
    "m_ratio_value",
    "butterfly_unadjusted_value",
    "butterfly_adjusted_value",
    "binary_m_unadjusted_value",
    "binary_m_adjusted_value",
    "binary_butterfly_unadjusted_value",
    "binary_butterfly_adjusted_value",
    "w_to_t_unadjusted_value",
    "w_to_t_adjusted_value",
]

Estimator = Literal["unadjusted", "adjusted"]
Method = Literal["closed_form", "sem_engine", "monte_carlo"]

_ESTIMATORS = ("unadjusted", "adjusted")


@dataclass(frozen=True)
class BiasResult:
    """Asymptotic bias of one estimator for one scenario.

    ``method`` records which derivation route produced the value.
    """

    estimator: Estimator
    value: float
    scenario: Scenario
    method: Method


def _check_estimator(estimator: str) -> None:
    if estimator not in _ESTIMATORS:
        raise ValueError(f"estimator must be one of {_ESTIMATORS}, got {estimator!r}")


def _check_valid(scenario: Scenario) -> None:
    report = validate(scenario)
    if not report.ok:
        labels = "; ".join(f"{v.constraint} (excess {v.margin:.3g})" for v in report.violations)
        raise ValidationError(f"invalid scenario: {labels}", violations=report.violations)


def _eta_at(alpha):
    if np.ndim(alpha) == 0:
        return kernels.eta(float(alpha))
    return np.vectorize(kernels.eta)(alpha)


def _pdf_at(alpha):
    if np.ndim(alpha) == 0:
        return kernels.std_normal_pdf(float(alpha))
    return np.vectorize(kernels.std_normal_pdf)(alpha)


# --- value kernels (no validation; scalar or array arguments) -------------


def m_unadjusted_value(a, b, c, d, rho):
    return a * d * rho


def m_adjusted_value(a, b, c, d, rho):
    return (a * d * rho * (1.0 - b * b - c * c - b * c * rho) - a * b * c * d) / (
        1.0 - (a * b + a * c * rho) ** 2
    )


def m_ratio_value(a, b, c, rho):
    """|adjusted / unadjusted| for the M structure; free of d."""
    return abs(
        (rho * (1.0 - b * b - c * c - b * c * rho) - b * c)
        / (rho * (1.0 - (a * b + a * c * rho) ** 2))
    )


def butterfly_unadjusted_value(a, b, c, d, e, f):
    return a * b * f + c * d * e + e * f


def butterfly_adjusted_value(a, b, c, d, e, f):
    return -(a * b * c * d) / (1.0 - (a * b + e) ** 2)


def binary_m_unadjusted_value(a, b, c, d, rho, alpha):
    return a * d * rho * _eta_at(alpha)


def binary_m_adjusted_value(a, b, c, d, rho, alpha, paper_literal: bool = False):
    et = _eta_at(alpha)
    ph = _pdf_at(alpha)
    numerator = a * d * et * (rho * (1.0 - b * b - c * c - b * c * rho) - b * c)
    denominator = 1.0 - (a * b + a * c * rho) ** 2 * (ph * et)
    if paper_literal:
        denominator = rho * denominator
    return numerator / denominator


def binary_butterfly_unadjusted_value(a, b, c, d, e, f, alpha):
    return (c * d * e + a * b * f + e * f) * _eta_at(alpha)


def binary_butterfly_adjusted_value(a, b, c, d, e, f, alpha):
    et = _eta_at(alpha)
    ph = _pdf_at(alpha)
    return -(a * b * c * d) * et / (1.0 - (a * b + e) ** 2 * (ph * et))


def w_to_t_unadjusted_value(a, b, c, d, g, rho):
    return a * d * rho + d * g


def w_to_t_adjusted_value(a, b, c, d, g, rho):
    """Adjusted bias for the W->T structure; closed form exists only at rho = 0."""
    if np.any(np.asarray(rho) != 0.0):
        raise UndefinedEstimatorError(
            "no closed form for the adjusted W->T bias with rho != 0; "
            "use the SEM engine route (w_to_t_bias does this automatically)"
        )
    return (d * g - c * d * (a * b + c * g)) / (1.0 - (a * b + c * g) ** 2)


# --- scenario-level API ----------------------------------------------------


def m_bias(scenario: MScenario, estimator: Estimator) -> BiasResult:
    """Asymptotic bias for the M structure.

    Unadjusted: a*d*rho.  Adjusted: the collider-conditioning formula; its
    denominator is positive for every valid scenario.
    """
    _check_estimator(estimator)
    _check_valid(scenario)
    s = scenario
    if estimator == "unadjusted":
        value = m_unadjusted_value(s.a, s.b, s.c, s.d, s.rho)
    else:
        value = m_adjusted_value(s.a, s.b, s.c, s.d, s.rho)
    return BiasResult(estimator, float(value), scenario, "closed_form")


def m_bias_ratio(scenario: MScenario) -> float:
    """|adjusted bias / unadjusted bias| for the M structure.

    The ratio does not involve d.  Raises
    :class:`UndefinedEstimatorError` at rho = 0, where the unadjusted bias
    vanishes.
    """
    _check_valid(scenario)
    if scenario.rho == 0.0:
        raise UndefinedEstimatorError("bias ratio undefined at rho = 0 (unadjusted bias is 0)")
    return float(m_ratio_value(scenario.a, scenario.b, scenario.c, scenario.rho))


def butterfly_bias(scenario: ButterflyScenario, estimator: Estimator) -> BiasResult:
    """Asymptotic bias for the butterfly structure.

    Unadjusted: a*b*f + c*d*e + e*f.  Adjusted: -a*b*c*d / (1 - (a*b + e)^2).
    """
    _check_estimator(estimator)
    _check_valid(scenario)
    s = scenario
    if estimator == "unadjusted":
        value = butterfly_unadjusted_value(s.a, s.b, s.c, s.d, s.e, s.f)
    else:
        value = butterfly_adjusted_value(s.a, s.b, s.c, s.d, s.e, s.f)
    return BiasResult(estimator, float(value), scenario, "closed_form")


def binary_m_bias(
    scenario: BinaryMScenario, estimator: Estimator, paper_literal: bool = False
) -> BiasResult:
    """Asymptotic bias for the M structure with dichotomized treatment.

    ``paper_literal`` switches the adjusted estimator to the negative-control
    variant with a spurious rho factor in the denominator (undefined at
    rho = 0); it is provided for audits only.
    """
    _check_estimator(estimator)
    _check_valid(scenario)
    s = scenario
    if estimator == "unadjusted":
        value = binary_m_unadjusted_value(s.a, s.b, s.c, s.d, s.rho, s.alpha)
    else:
        if paper_literal and s.rho == 0.0:
            raise UndefinedEstimatorError("paper-literal adjusted variant undefined at rho = 0")
        value = binary_m_adjusted_value(
            s.a, s.b, s.c, s.d, s.rho, s.alpha, paper_literal=paper_literal
        )
    return BiasResult(estimator, float(value), scenario, "closed_form")


def binary_butterfly_bias(scenario: BinaryButterflyScenario, estimator: Estimator) -> BiasResult:
    """Asymptotic bias for the butterfly structure with dichotomized treatment."""
    _check_estimator(estimator)
    _check_valid(scenario)
    s = scenario
    if estimator == "unadjusted":
        value = binary_butterfly_unadjusted_value(s.a, s.b, s.c, s.d, s.e, s.f, s.alpha)
    else:
        value = binary_butterfly_adjusted_value(s.a, s.b, s.c, s.d, s.e, s.f, s.alpha)
    return BiasResult(estimator, float(value), scenario, "closed_form")


def w_to_t_bias(scenario: WtoTScenario, estimator: Estimator) -> BiasResult:
    """Asymptotic bias for the M structure with a direct W -> T edge.

    The unadjusted bias a*d*rho + d*g is closed-form for any rho.  The
    adjusted estimator has a closed form only at rho = 0; for rho != 0 the
    value is derived through the SEM engine and labeled accordingly.
    """
    _check_estimator(estimator)
    _check_valid(scenario)
    s = scenario
    if estimator == "unadjusted":
        value = w_to_t_unadjusted_value(s.a, s.b, s.c, s.d, s.g, s.rho)
        return BiasResult(estimator, float(value), scenario, "closed_form")
    if s.rho == 0.0:
        value = w_to_t_adjusted_value(s.a, s.b, s.c, s.d, s.g, s.rho)
        return BiasResult(estimator, float(value), scenario, "closed_form")
    from . import sem

    value = sem.scenario_bias(scenario, "adjusted")
    return BiasResult(estimator, float(value), scenario, "sem_engine")


_BY_FAMILY = {
    "m": m_bias,
    "butterfly": butterfly_bias,
    "binary_m": binary_m_bias,
    "binary_butterfly": binary_butterfly_bias,
    "w_to_t": w_to_t_bias,
}


def bias(scenario: Scenario, estimator: Estimator, paper_literal: bool = False) -> BiasResult:
    """Family dispatch for :func:`m_bias` and friends."""
    fn = _BY_FAMILY[scenario.family]
    if scenario.family == "binary_m":
        return fn(scenario, estimator, paper_literal=paper_literal)
    return fn(scenario, estimator)


def bias_ratio(scenario: Scenario) -> float:
    """|adjusted / unadjusted| for any family.

    Uses the d-free closed form for the M structure; elsewhere the ratio of
    the two bias values.  Raises :class:`UndefinedEstimatorError` when the
    unadjusted bias is zero.
    """
    if isinstance(scenario, MScenario):
        return m_bias_ratio(scenario)
    unadj = bias(scenario, "unadjusted").value
    if unadj == 0.0:
        raise UndefinedEstimatorError("bias ratio undefined: unadjusted bias is 0")
    return abs(bias(scenario, "adjusted").value / unadj)
