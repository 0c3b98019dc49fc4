"""The .sem model format and the implied-covariance engine.

A model is a list of variables and weighted edges; `standardize on` asks
the engine to size every noise term so all variables come out with unit
variance.  The implied covariance then prices any population regression.
"""

from collider_lab import (
    MScenario,
    build_scenario_sem,
    implied_covariance,
    ols_coefficient,
    parse_sem,
)

TEXT = """\
# the M structure, spelled out by hand
var U
var W
var M
var T
var Y
edge U T 0.3
edge U M 0.3
edge W M 0.3
edge W Y 0.3
noisecorr U W 0.2
standardize on
"""

model = parse_sem(TEXT)
cov = implied_covariance(model)

print("implied covariance:")
header = "      " + "".join(f"{name:>8}" for name in cov.variables)
print(header)
for i, name in enumerate(cov.variables):
    row = "".join(f"{cov.matrix[i, j]:8.4f}" for j in range(len(cov.variables)))
    print(f"  {name:>3} {row}")

# T and Y are marginally dependent only through rho; conditioning on the
# collider M opens the U -> M <- W path.
print("\npopulation regressions of Y (true effect of T is zero):")
print(f"  Y ~ T      coefficient on T: {ols_coefficient(cov, 'Y', 'T'):+.6f}")
print(f"  Y ~ T + M  coefficient on T: {ols_coefficient(cov, 'Y', 'T', ('M',)):+.6f}")

# the same graph is what the catalog builds internally for each scenario
scenario = MScenario(0.3, 0.3, 0.3, 0.3, 0.2)
built = build_scenario_sem(scenario)
print(f"\nbuild_scenario_sem({scenario}) edges:")
for edge in built.edges:
    print(f"  {edge}")
