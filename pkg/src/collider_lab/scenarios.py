"""Scenario definitions, feasibility checks, and the scenario file format.

A scenario fixes the standardized path coefficients of one of five
data-generating structures built from treatment T, outcome Y, a collider M,
and latent causes U (of T and M) and W (of M and Y):

``m``
    U -> T (a), U -> M (b), W -> M (c), W -> Y (d), corr(U, W) = rho.
``butterfly``
    Adds M -> T (e) and M -> Y (f) to the M structure, with U and W
    independent.
``binary_m`` / ``binary_butterfly``
    Same graphs, but the observed treatment is the indicator T = 1{T* >=
    alpha} of the latent continuous treatment T*.
``w_to_t``
    M structure plus a direct W -> T edge (g); rho may be nonzero.

All variables are standardized: each structural equation carries a noise
loading chosen so its left-hand side has variance exactly 1.  The loading
must absorb the covariance of the systematic part, including cross-terms
such as 2*b*c*rho (collider M under correlated parents) or 2*a*b*e
(butterfly treatment, whose parents U and M are themselves correlated).
When a cross-term is nonzero, :func:`validate` attaches a warning, because
the naive loading sqrt(1 - sum of squared coefficients) would leave the
variable's variance off by exactly that cross-term.  When the exact loading
square is negative the scenario admits no unit-variance Gaussian
realization at all; formula evaluation and sweeps still cover such points
(the feasibility constraints below are pure coefficient restrictions), but
sampling and model construction raise :class:`RealizabilityError`.

Feasibility itself uses non-strict bounds for variance terms (a loading of
zero is a legal, deterministic node) and strict bounds for adjusted-estimator
denominators.
"""

import math
from dataclasses import dataclass, fields
from typing import Any, Callable, ClassVar, Mapping

from .errors import DomainError, ParseError, RealizabilityError

__all__ = [
    "MScenario",
    "ButterflyScenario",
    "BinaryMScenario",
    "BinaryButterflyScenario",
    "WtoTScenario",
    "Scenario",
    "Violation",
    "ValidationReport",
    "validate",
    "noise_loadings",
    "symmetric_butterfly_domain",
    "parse_scenario_text",
    "parse_scenario_file",
    "scenario_from_mapping",
    "scenario_mapping_from_text",
    "SCENARIO_TYPES",
]


@dataclass(frozen=True)
class MScenario:
    """M structure: treatment and outcome share no cause except through rho."""

    a: float
    b: float
    c: float
    d: float
    rho: float

    family: ClassVar[str] = "m"


@dataclass(frozen=True)
class ButterflyScenario:
    """Butterfly structure: the collider M also causes both T and Y."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    family: ClassVar[str] = "butterfly"


@dataclass(frozen=True)
class BinaryMScenario:
    """M structure with dichotomized treatment 1{T* >= alpha}."""

    a: float
    b: float
    c: float
    d: float
    rho: float
    alpha: float

    family: ClassVar[str] = "binary_m"


@dataclass(frozen=True)
class BinaryButterflyScenario:
    """Butterfly structure with dichotomized treatment 1{T* >= alpha}."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    alpha: float

    family: ClassVar[str] = "binary_butterfly"


@dataclass(frozen=True)
class WtoTScenario:
    """M structure with an extra W -> T edge of strength g."""

    a: float
    b: float
    c: float
    d: float
    g: float
    rho: float

    family: ClassVar[str] = "w_to_t"


Scenario = MScenario | ButterflyScenario | BinaryMScenario | BinaryButterflyScenario | WtoTScenario

SCENARIO_TYPES: dict[str, type] = {
    cls.family: cls
    for cls in (MScenario, ButterflyScenario, BinaryMScenario, BinaryButterflyScenario, WtoTScenario)
}


@dataclass(frozen=True)
class Violation:
    """One failed feasibility constraint; margin is the (positive) excess."""

    constraint: str
    margin: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class _Constraint:
    label: str
    strict: bool
    # margin(params) <= 0 (or < 0 when strict) means satisfied; written with
    # plain arithmetic so the same callable evaluates on numpy arrays.
    margin: Callable[[Mapping[str, Any]], Any]


@dataclass(frozen=True)
class _Family:
    params: tuple[str, ...]
    constraints: tuple[_Constraint, ...]
    # label -> value of the standardization cross-term; nonzero warrants a warning
    cross_terms: tuple[tuple[str, Callable[[Mapping[str, Any]], Any]], ...]
    # node -> exact-standardization loading square
    loading_squares: tuple[tuple[str, Callable[[Mapping[str, Any]], Any]], ...]


def _alpha_constraint() -> _Constraint:
    return _Constraint("|alpha| <= 8", False, lambda p: abs(p["alpha"]) - 8.0)


_M_CONSTRAINTS = (
    _Constraint("a^2 <= 1", False, lambda p: p["a"] ** 2 - 1.0),
    _Constraint("d^2 <= 1", False, lambda p: p["d"] ** 2 - 1.0),
    _Constraint("|rho| <= 1", False, lambda p: abs(p["rho"]) - 1.0),
    _Constraint("b^2 + c^2 <= 1", False, lambda p: p["b"] ** 2 + p["c"] ** 2 - 1.0),
    _Constraint(
        "|a*b + a*c*rho| < 1",
        True,
        lambda p: abs(p["a"] * p["b"] + p["a"] * p["c"] * p["rho"]) - 1.0,
    ),
)

_M_CROSS = (("2*b*c*rho", lambda p: 2.0 * p["b"] * p["c"] * p["rho"]),)

_M_LOADINGS = (
    ("T", lambda p: 1.0 - p["a"] ** 2),
    ("M", lambda p: 1.0 - p["b"] ** 2 - p["c"] ** 2 - 2.0 * p["b"] * p["c"] * p["rho"]),
    ("Y", lambda p: 1.0 - p["d"] ** 2),
)

_BUTTERFLY_CONSTRAINTS = (
    _Constraint("b^2 + c^2 <= 1", False, lambda p: p["b"] ** 2 + p["c"] ** 2 - 1.0),
    _Constraint("a^2 + e^2 <= 1", False, lambda p: p["a"] ** 2 + p["e"] ** 2 - 1.0),
    _Constraint("d^2 + f^2 <= 1", False, lambda p: p["d"] ** 2 + p["f"] ** 2 - 1.0),
    _Constraint("|a*b + e| < 1", True, lambda p: abs(p["a"] * p["b"] + p["e"]) - 1.0),
)

_BUTTERFLY_CROSS = (
    ("2*a*b*e", lambda p: 2.0 * p["a"] * p["b"] * p["e"]),
    ("2*c*d*f", lambda p: 2.0 * p["c"] * p["d"] * p["f"]),
)

_BUTTERFLY_LOADINGS = (
    ("M", lambda p: 1.0 - p["b"] ** 2 - p["c"] ** 2),
    ("T", lambda p: 1.0 - p["a"] ** 2 - p["e"] ** 2 - 2.0 * p["a"] * p["b"] * p["e"]),
    ("Y", lambda p: 1.0 - p["d"] ** 2 - p["f"] ** 2 - 2.0 * p["c"] * p["d"] * p["f"]),
)


def _w_to_t_tm_cov(p: Mapping[str, Any]) -> Any:
    # Cov(T, M) = ab + cg + (ac + bg) rho for T = aU + gW, M = bU + cW
    return p["a"] * p["b"] + p["c"] * p["g"] + (p["a"] * p["c"] + p["b"] * p["g"]) * p["rho"]


_W_TO_T_CONSTRAINTS = (
    _Constraint("a^2 + g^2 <= 1", False, lambda p: p["a"] ** 2 + p["g"] ** 2 - 1.0),
    _Constraint("d^2 <= 1", False, lambda p: p["d"] ** 2 - 1.0),
    _Constraint("|rho| <= 1", False, lambda p: abs(p["rho"]) - 1.0),
    _Constraint("b^2 + c^2 <= 1", False, lambda p: p["b"] ** 2 + p["c"] ** 2 - 1.0),
    _Constraint("|cov(T,M)| < 1", True, lambda p: abs(_w_to_t_tm_cov(p)) - 1.0),
)

_W_TO_T_CROSS = (
    ("2*b*c*rho", lambda p: 2.0 * p["b"] * p["c"] * p["rho"]),
    ("2*a*g*rho", lambda p: 2.0 * p["a"] * p["g"] * p["rho"]),
)

_W_TO_T_LOADINGS = (
    ("T", lambda p: 1.0 - p["a"] ** 2 - p["g"] ** 2 - 2.0 * p["a"] * p["g"] * p["rho"]),
    ("M", lambda p: 1.0 - p["b"] ** 2 - p["c"] ** 2 - 2.0 * p["b"] * p["c"] * p["rho"]),
    ("Y", lambda p: 1.0 - p["d"] ** 2),
)

FAMILIES: dict[str, _Family] = {
    "m": _Family(("a", "b", "c", "d", "rho"), _M_CONSTRAINTS, _M_CROSS, _M_LOADINGS),
    "binary_m": _Family(
        ("a", "b", "c", "d", "rho", "alpha"),
        _M_CONSTRAINTS + (_alpha_constraint(),),
        _M_CROSS,
        _M_LOADINGS,
    ),
    "butterfly": _Family(
        ("a", "b", "c", "d", "e", "f"), _BUTTERFLY_CONSTRAINTS, _BUTTERFLY_CROSS, _BUTTERFLY_LOADINGS
    ),
    "binary_butterfly": _Family(
        ("a", "b", "c", "d", "e", "f", "alpha"),
        _BUTTERFLY_CONSTRAINTS + (_alpha_constraint(),),
        _BUTTERFLY_CROSS,
        _BUTTERFLY_LOADINGS,
    ),
    "w_to_t": _Family(
        ("a", "b", "c", "d", "g", "rho"), _W_TO_T_CONSTRAINTS, _W_TO_T_CROSS, _W_TO_T_LOADINGS
    ),
}


def scenario_params(scenario: Scenario) -> dict[str, float]:
    """Parameter mapping of a scenario, in declaration order."""
    return {f.name: getattr(scenario, f.name) for f in fields(scenario)}


def validate(scenario: Scenario) -> ValidationReport:
    """Check feasibility constraints and standardization warnings.

    Returns a report whose ``violations`` list every failed constraint with
    its margin.  Warnings flag nonzero standardization cross-terms and
    non-realizable loadings; they never make a scenario invalid.  Non-finite
    fields raise :class:`DomainError`.
    """
    family = FAMILIES[scenario.family]
    params = scenario_params(scenario)
    for name, value in params.items():
        if not math.isfinite(value):
            raise DomainError(f"scenario field {name} must be finite, got {value!r}")

    violations = []
    for constraint in family.constraints:
        margin = float(constraint.margin(params))
        violated = margin >= 0.0 if constraint.strict else margin > 0.0
        if violated:
            violations.append(Violation(constraint.label, margin))

    warnings = []
    for label, term in family.cross_terms:
        value = float(term(params))
        if value != 0.0:
            warnings.append(
                f"standardization cross-term {label} = {value:.6g} is nonzero; "
                f"the noise loading absorbs it to keep unit variance"
            )
    for node, square in family.loading_squares:
        value = float(square(params))
        if value < 0.0:
            warnings.append(
                f"no unit-variance Gaussian realization: loading^2 of {node} = {value:.6g} < 0 "
                f"(formulas remain defined; sampling will fail)"
            )
    return ValidationReport(tuple(violations), tuple(warnings))


def noise_loadings(scenario: Scenario) -> dict[str, float]:
    """Exact-standardization noise loadings, keyed by variable name.

    These are the multipliers on the independent N(0,1) noises that give
    every structural equation unit variance.  Raises
    :class:`RealizabilityError` when some loading square is negative.
    """
    family = FAMILIES[scenario.family]
    params = scenario_params(scenario)
    loadings = {}
    for node, square in family.loading_squares:
        value = float(square(params))
        if value < 0.0:
            raise RealizabilityError(
                f"scenario is not realizable as a unit-variance Gaussian model: "
                f"loading^2 of {node} = {value:.6g} < 0"
            )
        loadings[node] = math.sqrt(value)
    return loadings


def symmetric_butterfly_domain() -> tuple[float, float]:
    """Feasible interval of the all-equal butterfly line a=b=c=d=e=f.

    The binding constraints are b^2 + c^2 < 1 (lower end) and |a*b + e| < 1
    (upper end), giving the open interval (-sqrt(2)/2, (sqrt(5)-1)/2).
    """
    return (-math.sqrt(2.0) / 2.0, (math.sqrt(5.0) - 1.0) / 2.0)


# --- scenario text format ------------------------------------------------
#
# One directive per line: "key = value".  "#" starts a comment, blank lines
# are skipped.  "structure" selects the family; the remaining keys are that
# family's parameters (rho spelled "rho", alpha spelled "alpha").


def _parse_directives(text: str) -> dict[str, tuple[str, int]]:
    directives: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        if key in directives:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        directives[key] = (value, lineno)
    return directives


def scenario_from_mapping(mapping: Mapping[str, str]) -> Scenario:
    """Build a scenario from string key/value pairs (file directives, CLI overrides)."""
    return _scenario_from_directives({k: (v, None) for k, v in mapping.items()})


def scenario_mapping_from_text(text: str) -> dict[str, str]:
    """Raw key/value directives of the scenario text format, syntax-checked.

    Used when directives from several sources (file, command line) must be
    merged before the completeness check.
    """
    return {key: value for key, (value, _) in _parse_directives(text).items()}


def _scenario_from_directives(directives: Mapping[str, tuple[str, int | None]]) -> Scenario:
    if "structure" not in directives:
        raise ParseError("missing required key: structure")
    structure, line = directives["structure"]
    if structure not in FAMILIES:
        known = ", ".join(sorted(FAMILIES))
        raise ParseError(f"unknown structure {structure!r} (expected one of: {known})", line=line)
    family = FAMILIES[structure]

    values: dict[str, float] = {}
    for key, (value, lineno) in directives.items():
        if key == "structure":
            continue
        if key not in family.params:
            raise ParseError(f"unknown key {key!r} for structure {structure!r}", line=lineno)
        try:
            values[key] = float(value)
        except ValueError:
            raise ParseError(f"value of {key!r} is not a number: {value!r}", line=lineno) from None

    missing = [p for p in family.params if p not in values]
    if missing:
        raise ParseError(
            f"missing required keys for structure {structure!r}: " + ", ".join(missing)
        )
    return SCENARIO_TYPES[structure](**values)


def parse_scenario_text(text: str) -> Scenario:
    """Parse the scenario text format into a scenario object."""
    return _scenario_from_directives(_parse_directives(text))


def parse_scenario_file(path) -> Scenario:
    """Parse a scenario file; I/O errors propagate as OSError."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario_text(handle.read())
