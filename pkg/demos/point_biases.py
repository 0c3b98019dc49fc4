"""Headline point values for collider adjustment.

Regressing Y on T alone versus on (T, M) in the M structure and the
butterfly structure, where the true effect of T is zero by construction.
Every number is computed three ways: closed form, implied-covariance
engine, and a quick Monte-Carlo fit.
"""

from collider_lab import (
    ButterflyScenario,
    MScenario,
    SimConfig,
    bias,
    bias_ratio,
    estimate_bias,
    scenario_bias,
)


def show(scenario, estimator, seed):
    closed = bias(scenario, estimator)
    engine = scenario_bias(scenario, estimator)
    mc = estimate_bias(scenario, estimator, SimConfig(n=200_000, seed=seed))
    print(
        f"  {estimator:>10}:  closed {closed.value:+.6f}   "
        f"engine {engine:+.6f}   mc {mc.bias_estimate:+.6f} (se {mc.std_error:.6f})"
    )


# M structure, all coefficients equal, U and W independent.  The unadjusted
# estimator is unbiased here; adjusting for the collider M is what hurts.
for x in (0.2, 0.3):
    scenario = MScenario(a=x, b=x, c=x, d=x, rho=0.0)
    print(f"M structure, a=b=c=d={x}, rho=0")
    show(scenario, "unadjusted", seed=1)
    show(scenario, "adjusted", seed=2)

# With correlated U and W both estimators are biased, and their comparison
# does not involve d at all:
print("\nM structure, a=b=c=rho=0.2: |adjusted| / |unadjusted| for several d")
for d in (0.1, 0.3, 0.6):
    ratio = bias_ratio(MScenario(0.2, 0.2, 0.2, d, 0.2))
    print(f"  d={d}:  ratio {ratio:.6f}")

# Butterfly structure: M is a confounder as well as a collider, so now the
# unadjusted estimator carries the larger bias at the all-equal point.
scenario = ButterflyScenario(a=0.2, b=0.2, c=0.2, d=0.2, e=0.2, f=0.2)
print("\nButterfly, all coefficients 0.2")
show(scenario, "unadjusted", seed=3)
show(scenario, "adjusted", seed=4)
