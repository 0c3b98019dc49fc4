"""Closed-form bias tests.

Frozen values were computed two ways before this module existed: exact
40-digit arithmetic (mpmath) and an independent transcription of each
formula; both agree to the digits shown.
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from collider_lab.errors import UndefinedEstimatorError, ValidationError
from collider_lab.formulas import (
    bias,
    bias_ratio,
    binary_butterfly_bias,
    binary_m_adjusted_value,
    binary_m_bias,
    butterfly_bias,
    m_adjusted_value,
    m_bias,
    m_bias_ratio,
    m_ratio_value,
    w_to_t_adjusted_value,
    w_to_t_bias,
)
from collider_lab.kernels import eta, std_normal_pdf
from collider_lab.scenarios import (
    BinaryButterflyScenario,
    BinaryMScenario,
    ButterflyScenario,
    MScenario,
    WtoTScenario,
)

small = st.floats(min_value=-0.6, max_value=0.6, allow_nan=False)


# --- frozen anchors -----------------------------------------------------------


def test_m_adjusted_anchor_values():
    r2 = m_bias(MScenario(0.2, 0.2, 0.2, 0.2, 0.0), "adjusted")
    assert math.isclose(r2.value, -0.0016025641025641032, rel_tol=1e-14)
    assert round(r2.value, 4) == -0.0016
    r3 = m_bias(MScenario(0.3, 0.3, 0.3, 0.3, 0.0), "adjusted")
    assert math.isclose(r3.value, -0.008166145780824679, rel_tol=1e-14)
    assert round(r3.value, 4) == -0.0082
    assert r2.method == "closed_form"


def test_m_unadjusted_is_ad_rho():
    assert m_bias(MScenario(0.2, 0.9, -0.3, 0.5, 0.0), "unadjusted").value == 0.0
    assert m_bias(MScenario(0.2, 0.2, 0.2, 0.5, 0.4), "unadjusted").value == 0.2 * 0.5 * 0.4


def test_m_ratio_anchor():
    value = m_bias_ratio(MScenario(0.2, 0.2, 0.2, 0.5, 0.2))
    assert math.isclose(value, 0.7136442363204822, rel_tol=1e-14)
    assert round(value, 3) == 0.714


def test_m_ratio_is_d_free_bitwise():
    values = {m_bias_ratio(MScenario(0.2, 0.2, 0.2, d, 0.2)) for d in (0.1, 0.3, 0.6)}
    assert len(values) == 1


def test_m_ratio_undefined_at_rho_zero():
    with pytest.raises(UndefinedEstimatorError):
        m_bias_ratio(MScenario(0.2, 0.2, 0.2, 0.2, 0.0))


def test_m_ratio_b_zero_special_case():
    # reduces to (1 - c^2) / (1 - (a*c*rho)^2)
    value = m_bias_ratio(MScenario(a=0.3, b=0.0, c=0.4, d=0.5, rho=0.5))
    assert math.isclose(value, 0.8430349257326375, rel_tol=1e-14)
    assert math.isclose(value, (1 - 0.16) / (1 - (0.3 * 0.4 * 0.5) ** 2), rel_tol=1e-14)


def test_butterfly_anchor_values():
    s = ButterflyScenario(*(0.2,) * 6)
    unadj = butterfly_bias(s, "unadjusted").value
    adj = butterfly_bias(s, "adjusted").value
    assert math.isclose(unadj, 0.056, rel_tol=1e-14)
    assert math.isclose(adj, -0.0016977928692699495, rel_tol=1e-14)
    assert round(adj, 4) == -0.0017


def test_butterfly_degenerates_to_m():
    # e = f = 0 removes the extra edges; biases equal the rho=0 M structure
    s = ButterflyScenario(0.31, 0.17, 0.23, 0.41, 0.0, 0.0)
    m = MScenario(0.31, 0.17, 0.23, 0.41, 0.0)
    for estimator in ("unadjusted", "adjusted"):
        assert butterfly_bias(s, estimator).value == m_bias(m, estimator).value


def test_binary_m_anchor_value():
    s = BinaryMScenario(0.3, 0.3, 0.3, 0.3, 0.0, 0.0)
    value = binary_m_bias(s, "adjusted").value
    assert math.isclose(value, -0.012992728450417584, rel_tol=1e-13)
    # special case at rho = 0, written independently
    a = b = c = d = 0.3
    expected = -a * b * c * d * eta(0.0) / (1 - (a * b) ** 2 * std_normal_pdf(0.0) * eta(0.0))
    assert math.isclose(value, expected, rel_tol=5e-16)


def test_binary_m_rho_zero_matches_special_case_bitwise():
    # At rho = 0 every rho-term folds away exactly (x*0.0 == 0.0, 0.0 - bc ==
    # -(bc)), so the general expression must equal its own rho-free form
    # bitwise; agreement with the reordered product -a*b*c*d*eta is then up
    # to multiplication order only (<= 2 ulp).
    for (a, b, c, d, alpha) in [
        (0.3, 0.3, 0.3, 0.3, 0.0),
        (0.25, -0.4, 0.55, 0.6, 0.7),
        (-0.5, 0.2, 0.35, -0.15, -1.2),
    ]:
        et = eta(alpha)
        ph = std_normal_pdf(alpha)
        general = binary_m_adjusted_value(a, b, c, d, 0.0, alpha)
        folded = a * d * et * (-(b * c)) / (1.0 - (a * b) ** 2 * (ph * et))
        assert general == folded
        transcribed = -a * b * c * d * et / (1.0 - (a * b) ** 2 * (ph * et))
        assert math.isclose(general, transcribed, rel_tol=5e-16)


def test_binary_m_unadjusted_scales_with_eta():
    s1 = BinaryMScenario(0.2, 0.2, 0.2, 0.5, 0.4, 0.0)
    s2 = BinaryMScenario(0.2, 0.2, 0.2, 0.5, 0.4, 0.5)
    v1 = binary_m_bias(s1, "unadjusted").value
    v2 = binary_m_bias(s2, "unadjusted").value
    assert math.isclose(v1 / v2, eta(0.0) / eta(0.5), rel_tol=1e-14)


def test_binary_m_even_in_alpha():
    for estimator in ("unadjusted", "adjusted"):
        plus = binary_m_bias(BinaryMScenario(0.2, 0.3, 0.2, 0.4, 0.3, 0.8), estimator).value
        minus = binary_m_bias(BinaryMScenario(0.2, 0.3, 0.2, 0.4, 0.3, -0.8), estimator).value
        assert plus == minus


def test_paper_literal_variant():
    s = BinaryMScenario(0.3, 0.2, 0.4, 0.3, 0.25, 0.5)
    general = binary_m_bias(s, "adjusted").value
    literal = binary_m_bias(s, "adjusted", paper_literal=True).value
    # the stray factor divides the whole expression by rho
    assert math.isclose(literal, general / 0.25, rel_tol=1e-14)
    with pytest.raises(UndefinedEstimatorError):
        binary_m_bias(BinaryMScenario(0.3, 0.2, 0.4, 0.3, 0.0, 0.5), "adjusted", paper_literal=True)


def test_binary_butterfly_anchor_value():
    s = BinaryButterflyScenario(*(0.2,) * 6, 0.0)
    value = binary_butterfly_bias(s, "unadjusted").value
    assert math.isclose(value, 0.08936307080992092, rel_tol=1e-13)
    assert math.isclose(value, 0.056 * eta(0.0), rel_tol=1e-13)


def test_binary_adjusted_numerator_matches_continuous_times_eta():
    # at rho = 0 the adjusted numerators are the continuous ones scaled by eta
    a, b, c, d, alpha = 0.3, 0.25, 0.4, 0.35, 0.6
    cont = m_adjusted_value(a, b, c, d, 0.0) * (1.0 - (a * b) ** 2)
    binm = binary_m_adjusted_value(a, b, c, d, 0.0, alpha) * (
        1.0 - (a * b) ** 2 * (std_normal_pdf(alpha) * eta(alpha))
    )
    assert math.isclose(binm, cont * eta(alpha), rel_tol=1e-13)


def test_w_to_t_anchor_values():
    s = WtoTScenario(0.2, 0.2, 0.2, 0.2, 0.2, 0.0)
    assert w_to_t_bias(s, "unadjusted").value == 0.2 * 0.2
    adj = w_to_t_bias(s, "adjusted")
    assert math.isclose(adj.value, 0.037037037037037035, rel_tol=1e-14)
    assert adj.method == "closed_form"


def test_w_to_t_degenerates_to_m():
    s = WtoTScenario(0.31, 0.17, 0.23, 0.41, 0.0, 0.0)
    m = MScenario(0.31, 0.17, 0.23, 0.41, 0.0)
    assert w_to_t_bias(s, "unadjusted").value == m_bias(m, "unadjusted").value
    assert math.isclose(
        w_to_t_bias(s, "adjusted").value, m_bias(m, "adjusted").value, rel_tol=1e-14
    )


def test_w_to_t_nonzero_rho_goes_through_the_engine():
    s = WtoTScenario(0.2, 0.2, 0.2, 0.2, 0.2, 0.3)
    result = w_to_t_bias(s, "adjusted")
    assert result.method == "sem_engine"
    assert math.isfinite(result.value)
    with pytest.raises(UndefinedEstimatorError):
        w_to_t_adjusted_value(0.2, 0.2, 0.2, 0.2, 0.2, 0.3)


# --- generic dispatch ----------------------------------------------------------


def test_bias_dispatch_covers_all_families():
    cases = [
        MScenario(0.2, 0.2, 0.2, 0.2, 0.1),
        ButterflyScenario(*(0.2,) * 6),
        BinaryMScenario(0.2, 0.2, 0.2, 0.2, 0.1, 0.3),
        BinaryButterflyScenario(*(0.2,) * 6, 0.3),
        WtoTScenario(0.2, 0.2, 0.2, 0.2, 0.2, 0.0),
    ]
    for scenario in cases:
        for estimator in ("unadjusted", "adjusted"):
            result = bias(scenario, estimator)
            assert result.scenario is scenario
            assert math.isfinite(result.value)


def test_bias_ratio_generic_families():
    s = ButterflyScenario(*(0.2,) * 6)
    unadj = bias(s, "unadjusted").value
    adj = bias(s, "adjusted").value
    assert math.isclose(bias_ratio(s), abs(adj / unadj), rel_tol=1e-14)
    with pytest.raises(UndefinedEstimatorError):
        bias_ratio(ButterflyScenario(0.2, 0.2, 0.2, 0.2, 0.0, 0.0))  # unadjusted bias 0


def test_invalid_scenario_raises_validation_error():
    with pytest.raises(ValidationError, match="rho"):
        m_bias(MScenario(0.2, 0.2, 0.2, 0.2, 1.5), "adjusted")
    with pytest.raises(ValueError, match="estimator"):
        m_bias(MScenario(0.2, 0.2, 0.2, 0.2, 0.0), "midway")


# --- properties ----------------------------------------------------------------


@given(small, small, small, small)
def test_m_adjusted_sign_at_rho_zero(a, b, c, d):
    # sign(-abcd): adjusting in a pure M structure biases against the product
    value = m_adjusted_value(a, b, c, d, 0.0)
    assert math.copysign(1.0, value) == math.copysign(1.0, -a * b * c * d) or value == 0.0


@given(small, small, st.floats(min_value=-0.9, max_value=0.9))
def test_m_ratio_at_most_one_when_b_or_c_zero(a, x, rho):
    assume(rho != 0.0)
    assert m_ratio_value(a, 0.0, x, rho) <= 1.0 + 1e-12
    assert m_ratio_value(a, x, 0.0, rho) <= 1.0 + 1e-12


@given(small, small, small, small, st.floats(min_value=-0.9, max_value=0.9))
def test_value_kernels_accept_arrays(a, b, c, d, rho):
    scalar = m_adjusted_value(a, b, c, d, rho)
    array = m_adjusted_value(np.array([a, a]), b, c, d, np.array([rho, rho]))
    assert array.shape == (2,)
    assert array[0] == scalar == array[1]
