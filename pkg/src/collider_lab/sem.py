"""General linear-SEM covariance engine.

This is the package's second, formula-free derivation route.  A
:class:`LinearSem` is a DAG of structural equations

    v = sum(coef * parent for each edge parent -> v) + loading_v * eps_v

with independent standard normal noises except for declared noise
correlations (used for the latent pair U, W).  :func:`implied_covariance`
rewrites every variable in terms of the exogenous noises by substitution in
topological order and assembles the exact second-moment matrix; no linear
system is inverted.  Under ``standardize on`` each loading is chosen so the
variable's variance is exactly 1, covariance cross-terms included; a
negative loading square means the model is not realizable and raises
:class:`RealizabilityError`.

:func:`ols_coefficient` turns an implied covariance into a population
regression coefficient via the normal equations, and :func:`binary_link`
maps the covariances of a latent unit-variance variable to those of its
dichotomization 1{latent >= alpha}:

    Var(B) = Phi(alpha) * Phi(-alpha)
    Cov(V, B) = Phi(alpha) * Phi(-alpha) * eta(alpha) * Cov(V, latent)

Together with :func:`build_scenario_sem` these reproduce every closed form
in :mod:`collider_lab.formulas` from the graph alone.

The ``.sem`` text format accepted by :func:`parse_sem`::

    # comment
    standardize on          # or off: unit noise loading instead
    var U
    var W
    var M
    noisecorr U W 0.2
    edge U M 0.3

Parse errors carry 1-based line numbers.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    ParseError,
    RealizabilityError,
    UndefinedEstimatorError,
    ValidationError,
)
from .kernels import eta, std_normal_cdf
from .scenarios import Scenario, validate

__all__ = [
    "LinearSem",
    "CovMatrix",
    "parse_sem",
    "parse_sem_file",
    "implied_covariance",
    "ols_coefficient",
    "binary_link",
    "build_scenario_sem",
    "scenario_covariance",
    "scenario_bias",
]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# Loading squares in (-_REALIZABILITY_SLACK, 0) are treated as exact zeros;
# they arise from rounding at loading-0 boundaries like b^2 + c^2 == 1.
_REALIZABILITY_SLACK = 1e-12


@dataclass(frozen=True)
class LinearSem:
    """Immutable linear SEM: variables, weighted edges, noise correlations."""

    variables: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    noise_corr: tuple[tuple[str, str, float], ...] = ()
    standardized: bool = True


@dataclass(frozen=True)
class CovMatrix:
    """Covariance matrix with named rows/columns."""

    variables: tuple[str, ...]
    matrix: np.ndarray

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r}") from None

    def cov(self, x: str, y: str) -> float:
        return float(self.matrix[self.index(x), self.index(y)])

    def var(self, x: str) -> float:
        i = self.index(x)
        return float(self.matrix[i, i])


def _topological_order(variables: tuple[str, ...], edges) -> list[str]:
    children: dict[str, list[str]] = {v: [] for v in variables}
    indegree = {v: 0 for v in variables}
    for src, dst, _ in edges:
        children[src].append(dst)
        indegree[dst] += 1
    ready = [v for v in variables if indegree[v] == 0]
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for child in children[v]:
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(child)
    if len(order) != len(variables):
        cyclic = sorted(v for v in variables if indegree[v] > 0)
        raise ParseError(f"edge set contains a cycle through: {', '.join(cyclic)}")
    return order


def parse_sem(text: str) -> LinearSem:
    """Parse the ``.sem`` text format; errors carry line numbers."""
    variables: list[str] = []
    edges: list[tuple[str, str, float]] = []
    noise_corr: list[tuple[str, str, float]] = []
    standardized = True
    seen_edges: set[tuple[str, str]] = set()
    seen_corr: set[frozenset] = set()

    def number(token: str, what: str, lineno: int) -> float:
        try:
            value = float(token)
        except ValueError:
            raise ParseError(f"{what} is not a number: {token!r}", line=lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"{what} must be finite, got {token!r}", line=lineno)
        return value

    def known(name: str, lineno: int) -> str:
        if name not in variables:
            raise ParseError(f"undeclared variable {name!r}", line=lineno)
        return name

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]
        if directive == "var":
            if len(args) != 1:
                raise ParseError("var takes exactly one name", line=lineno)
            name = args[0]
            if not _NAME_RE.match(name):
                raise ParseError(f"invalid variable name {name!r}", line=lineno)
            if name in variables:
                raise ParseError(f"duplicate variable {name!r}", line=lineno)
            variables.append(name)
        elif directive == "edge":
            if len(args) != 3:
                raise ParseError("edge takes: edge SRC DST COEF", line=lineno)
            src, dst = known(args[0], lineno), known(args[1], lineno)
            if src == dst:
                raise ParseError(f"self-edge on {src!r}", line=lineno)
            if (src, dst) in seen_edges:
                raise ParseError(f"duplicate edge {src} -> {dst}", line=lineno)
            seen_edges.add((src, dst))
            edges.append((src, dst, number(args[2], "edge coefficient", lineno)))
        elif directive == "noisecorr":
            if len(args) != 3:
                raise ParseError("noisecorr takes: noisecorr A B RHO", line=lineno)
            a, b = known(args[0], lineno), known(args[1], lineno)
            if a == b:
                raise ParseError(f"noisecorr of {a!r} with itself", line=lineno)
            if frozenset((a, b)) in seen_corr:
                raise ParseError(f"duplicate noisecorr for {a}, {b}", line=lineno)
            seen_corr.add(frozenset((a, b)))
            value = number(args[2], "noise correlation", lineno)
            if abs(value) > 1.0:
                raise ParseError(f"noise correlation must lie in [-1, 1], got {value}", line=lineno)
            noise_corr.append((a, b, value))
        elif directive == "standardize":
            if len(args) != 1 or args[0] not in ("on", "off"):
                raise ParseError("standardize takes 'on' or 'off'", line=lineno)
            standardized = args[0] == "on"
        else:
            raise ParseError(f"unknown directive {directive!r}", line=lineno)

    if standardized:
        for src, dst, coef in edges:
            if abs(coef) > 1.0:
                raise ParseError(
                    f"edge coefficient {src} -> {dst} = {coef} outside [-1, 1] "
                    f"(required under standardize on)"
                )
    sem = LinearSem(tuple(variables), tuple(edges), tuple(noise_corr), standardized)
    _topological_order(sem.variables, sem.edges)  # reject cycles at parse time
    return sem


def parse_sem_file(path) -> LinearSem:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_sem(handle.read())


def implied_covariance(sem: LinearSem) -> CovMatrix:
    """Exact implied covariance of all variables by reduced-form substitution."""
    n = len(sem.variables)
    idx = {v: i for i, v in enumerate(sem.variables)}

    noise_corr = np.eye(n)
    for a, b, value in sem.noise_corr:
        noise_corr[idx[a], idx[b]] = value
        noise_corr[idx[b], idx[a]] = value
    if sem.noise_corr:
        smallest = float(np.linalg.eigvalsh(noise_corr).min())
        if smallest < -1e-10:
            raise DomainError(
                f"noise correlation matrix is not positive semidefinite "
                f"(smallest eigenvalue {smallest:.3g})"
            )

    parents: dict[str, list[tuple[str, float]]] = {v: [] for v in sem.variables}
    for src, dst, coef in sem.edges:
        parents[dst].append((src, coef))

    # reduced[v] expresses v as a linear combination of the exogenous noises
    reduced = np.zeros((n, n))
    for v in _topological_order(sem.variables, sem.edges):
        i = idx[v]
        systematic = np.zeros(n)
        for parent, coef in parents[v]:
            systematic += coef * reduced[idx[parent]]
        if sem.standardized:
            explained = float(systematic @ noise_corr @ systematic)
            loading_sq = 1.0 - explained
            if loading_sq < 0.0:
                if loading_sq < -_REALIZABILITY_SLACK:
                    raise RealizabilityError(
                        f"variable {v!r} cannot be standardized: systematic variance "
                        f"{explained:.6g} exceeds 1"
                    )
                loading_sq = 0.0
            loading = math.sqrt(loading_sq)
        else:
            loading = 1.0
        reduced[i] = systematic
        reduced[i, i] += loading

    return CovMatrix(sem.variables, reduced @ noise_corr @ reduced.T)


def ols_coefficient(cov: CovMatrix, outcome: str, treatment: str, controls=()) -> float:
    """Population OLS coefficient on ``treatment`` in a regression of
    ``outcome`` on ``treatment`` plus ``controls``, from second moments
    alone (normal equations)."""
    controls = tuple(controls)
    if treatment in controls or outcome in (treatment, *controls):
        raise DomainError("outcome, treatment, and controls must be distinct")
    regressors = (treatment,) + controls
    rows = [cov.index(name) for name in regressors]
    gram = cov.matrix[np.ix_(rows, rows)]
    moments = cov.matrix[rows, cov.index(outcome)]
    eigenvalues = np.linalg.eigvalsh(gram)
    if eigenvalues[0] <= eigenvalues[-1] * 1e-12 or eigenvalues[-1] <= 0.0:
        raise UndefinedEstimatorError(
            f"singular regressor Gram matrix for {regressors} "
            f"(eigenvalues {eigenvalues.min():.3g} .. {eigenvalues.max():.3g})"
        )
    beta = np.linalg.solve(gram, moments)
    return float(beta[0])


def binary_link(cov: CovMatrix, latent: str, alpha: float, rename: str | None = None) -> CovMatrix:
    """Covariance summaries after dichotomizing ``latent`` at ``alpha``.

    Requires the latent variable to have unit variance (the mean-gap identity
    is stated on the standardized scale).  All covariances not involving the
    latent are unchanged.
    """
    i = cov.index(latent)
    if abs(cov.var(latent) - 1.0) > 1e-8:
        raise DomainError(
            f"binary_link requires a unit-variance latent; Var({latent}) = {cov.var(latent):.6g}"
        )
    bernoulli_var = std_normal_cdf(alpha) * std_normal_cdf(-alpha)
    scale = bernoulli_var * eta(alpha)  # eta() enforces |alpha| <= 8
    matrix = cov.matrix.copy()
    matrix[i, :] *= scale
    matrix[:, i] *= scale
    matrix[i, i] = bernoulli_var
    variables = list(cov.variables)
    if rename is not None:
        variables[i] = rename
    return CovMatrix(tuple(variables), matrix)


_SCENARIO_GRAPHS = {
    # family -> (treatment node, edges as (src, dst, param), correlated noises)
    "m": ("T", (("U", "T", "a"), ("U", "M", "b"), ("W", "M", "c"), ("W", "Y", "d")), True),
    "binary_m": (
        "T_star",
        (("U", "T_star", "a"), ("U", "M", "b"), ("W", "M", "c"), ("W", "Y", "d")),
        True,
    ),
    "butterfly": (
        "T",
        (
            ("U", "M", "b"),
            ("W", "M", "c"),
            ("U", "T", "a"),
            ("M", "T", "e"),
            ("W", "Y", "d"),
            ("M", "Y", "f"),
        ),
        False,
    ),
    "binary_butterfly": (
        "T_star",
        (
            ("U", "M", "b"),
            ("W", "M", "c"),
            ("U", "T_star", "a"),
            ("M", "T_star", "e"),
            ("W", "Y", "d"),
            ("M", "Y", "f"),
        ),
        False,
    ),
    "w_to_t": (
        "T",
        (
            ("U", "T", "a"),
            ("W", "T", "g"),
            ("U", "M", "b"),
            ("W", "M", "c"),
            ("W", "Y", "d"),
        ),
        True,
    ),
}


def build_scenario_sem(scenario: Scenario) -> LinearSem:
    """Structural model of a scenario (latent treatment named T_star when binary)."""
    report = validate(scenario)
    if not report.ok:
        labels = "; ".join(v.constraint for v in report.violations)
        raise ValidationError(f"invalid scenario: {labels}", violations=report.violations)
    treatment, edge_spec, correlated = _SCENARIO_GRAPHS[scenario.family]
    variables = ("U", "W", "M", treatment, "Y")
    edges = tuple((src, dst, float(getattr(scenario, param))) for src, dst, param in edge_spec)
    noise_corr = (("U", "W", float(scenario.rho)),) if correlated else ()
    return LinearSem(variables, edges, noise_corr, standardized=True)


def scenario_covariance(scenario: Scenario) -> CovMatrix:
    """Implied covariance of (U, W, M, T, Y), dichotomizing T when binary."""
    cov = implied_covariance(build_scenario_sem(scenario))
    if scenario.family in ("binary_m", "binary_butterfly"):
        cov = binary_link(cov, "T_star", scenario.alpha, rename="T")
    return cov


def scenario_bias(scenario: Scenario, estimator: str) -> float:
    """Engine-route bias: population OLS coefficient on T, optionally
    controlling for M."""
    if estimator not in ("unadjusted", "adjusted"):
        raise ValueError(f"estimator must be 'unadjusted' or 'adjusted', got {estimator!r}")
    controls = ("M",) if estimator == "adjusted" else ()
    return ols_coefficient(scenario_covariance(scenario), "Y", "T", controls)
