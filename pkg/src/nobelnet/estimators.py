"""Binary-outcome models, citation-break regressions, won-after lists.

Logit and probit are fitted by Newton-Raphson on the analytic gradient
and Hessian, with step-halving so the log-likelihood never decreases.
Both likelihoods are globally concave, so the zero vector is a safe
deterministic start.  Standard errors come from the inverse observed
information at the optimum; t-statistics are read against the standard
normal.

Fixed effects are plain dummy columns with the lexicographically first
category absorbed into the intercept.  Categories whose rows all share
one outcome make the likelihood unbounded; `drop_separated_groups`
removes those rows (not just the columns) before fitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from .errors import (
    AllRowsDroppedError,
    DegenerateDesignError,
    PerfectSeparationError,
    RankDeficientError,
    UnknownCovariateError,
    ValidationError,
)
from .genealogy import Direction, GenealogyGraph, all_distances
from .panel import PanelRow
from .proximity import peer_proximity

MAX_ITERATIONS = 100
SCORE_TOLERANCE = 1e-8
STEP_TOLERANCE = 1e-10
MAX_STEP_HALVINGS = 30
#: A coefficient this large on a [0, 1]-scaled regressor has left any
#: plausible region of the likelihood; treat it as separation.
DIVERGENCE_LIMIT = 500.0

EFFECT_KEYS = {"year": "year_key", "alma": "alma_key", "field": "field_key"}


class Link(str, Enum):
    LOGIT = "logit"
    PROBIT = "probit"


class DroppedGroup(NamedTuple):
    group: str
    reason: str


@dataclass(eq=False)
class DesignMatrix:
    """Expanded regression inputs plus the ingredients to re-expand them.

    `matrix` holds the intercept (when requested), the plain covariates,
    and one dummy per non-reference category of each effect set, in that
    order.  `group_labels` keeps the raw per-row category labels so that
    separation handling can remove rows and rebuild the dummies with a
    fresh reference.
    """

    outcome: np.ndarray
    matrix: np.ndarray
    columns: list[str]
    covariates: tuple[str, ...]
    covariate_values: np.ndarray
    group_labels: dict[str, list[str]]
    intercept: bool = True
    dropped: list[DroppedGroup] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return int(self.outcome.shape[0])

    def equals(self, other: DesignMatrix) -> bool:
        return (
            self.columns == other.columns
            and np.array_equal(self.outcome, other.outcome)
            and np.array_equal(self.matrix, other.matrix)
        )


def _expand(
    outcome: np.ndarray,
    covariates: tuple[str, ...],
    covariate_values: np.ndarray,
    group_labels: dict[str, list[str]],
    intercept: bool,
    dropped: list[DroppedGroup],
) -> DesignMatrix:
    n = outcome.shape[0]
    columns: list[str] = []
    parts: list[np.ndarray] = []
    if intercept:
        columns.append("intercept")
        parts.append(np.ones((n, 1)))
    if covariates:
        columns.extend(covariates)
        parts.append(covariate_values)
    for effect, labels in group_labels.items():
        categories = sorted(set(labels))
        for category in categories[1:]:  # first category is the reference
            columns.append(f"{effect}:{category}")
            parts.append(
                np.fromiter(
                    (1.0 if lab == category else 0.0 for lab in labels),
                    dtype=float,
                    count=n,
                ).reshape(n, 1)
            )
    matrix = np.hstack(parts) if parts else np.empty((n, 0))
    _check_columns(matrix, columns, intercept)
    return DesignMatrix(
        outcome=outcome,
        matrix=matrix,
        columns=columns,
        covariates=covariates,
        covariate_values=covariate_values,
        group_labels=group_labels,
        intercept=intercept,
        dropped=dropped,
    )


def _check_columns(matrix: np.ndarray, columns: list[str], intercept: bool) -> None:
    for j, name in enumerate(columns):
        if intercept and j == 0:
            continue
        column = matrix[:, j]
        if column.size and np.all(column == column[0]):
            raise RankDeficientError(f"column {name!r} is constant")
    for j in range(len(columns)):
        for k in range(j + 1, len(columns)):
            if np.array_equal(matrix[:, j], matrix[:, k]):
                raise RankDeficientError(
                    f"columns {columns[j]!r} and {columns[k]!r} are identical"
                )


def build_design(
    panel: Sequence[PanelRow],
    covariates: Sequence[str] = ("female", "prof_rel", "student_rel", "peer_rel"),
    effects: Sequence[str] = (),
) -> DesignMatrix:
    """Turn panel rows into a regression design.

    Covariate names resolve against the row ("female") or its proximity
    vector ("prof_rel", "peer_recent_rel", ...).  `effects` picks the
    dummy sets to expand: any of "year", "alma", "field".
    """
    if not panel:
        raise DegenerateDesignError("empty panel")
    for effect in effects:
        if effect not in EFFECT_KEYS:
            raise ValueError(f"unknown effect set {effect!r}")
    outcome = np.array([row.won for row in panel], dtype=float)
    values = np.empty((len(panel), len(covariates)))
    for j, name in enumerate(covariates):
        values[:, j] = [_row_value(row, name) for row in panel]
    labels = {
        effect: [getattr(row, EFFECT_KEYS[effect]) for row in panel]
        for effect in effects
    }
    return _expand(outcome, tuple(covariates), values, labels, True, [])


def _row_value(row: PanelRow, name: str) -> float:
    if name == "female":
        return float(row.female)
    try:
        return float(getattr(row.prox, name))
    except AttributeError:
        raise ValueError(f"unknown covariate {name!r}") from None


def design_from_arrays(
    outcome: np.ndarray,
    values: np.ndarray,
    names: Sequence[str],
    intercept: bool = True,
) -> DesignMatrix:
    """Design matrix straight from arrays, for synthetic fits."""
    outcome = np.asarray(outcome, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    return _expand(outcome, tuple(names), values, {}, intercept, [])


def drop_separated_groups(design: DesignMatrix) -> DesignMatrix:
    """Remove the rows of outcome-degenerate dummy categories.

    A category whose rows are all zeros (or all ones) would push its
    coefficient to infinity, so the whole category leaves the sample and
    its dummy with it.  Repeats until no category is degenerate, since a
    removal can strand winners of another set.
    """
    if not design.group_labels:
        raise ValueError("design has no categorical sets")
    outcome = design.outcome
    values = design.covariate_values
    labels = {effect: list(labs) for effect, labs in design.group_labels.items()}
    dropped = list(design.dropped)

    while True:
        doomed = np.zeros(outcome.shape[0], dtype=bool)
        for effect in labels:
            effect_labels = np.array(labels[effect])
            for category in sorted(set(labels[effect])):
                mask = effect_labels == category
                wins = outcome[mask]
                if np.all(wins == 0.0):
                    dropped.append(
                        DroppedGroup(
                            f"{effect}:{category}",
                            f"no winners among {int(mask.sum())} rows",
                        )
                    )
                    doomed |= mask
                elif np.all(wins == 1.0):
                    dropped.append(
                        DroppedGroup(
                            f"{effect}:{category}",
                            f"all {int(mask.sum())} rows are winners",
                        )
                    )
                    doomed |= mask
        if not doomed.any():
            break
        keep = ~doomed
        if not keep.any():
            raise AllRowsDroppedError("separation handling removed every row")
        outcome = outcome[keep]
        values = values[keep]
        labels = {
            effect: [lab for lab, k in zip(labs, keep) if k]
            for effect, labs in labels.items()
        }

    return _expand(
        outcome, design.covariates, values, labels, design.intercept, dropped
    )


@dataclass
class GlmFit:
    """Maximum-likelihood estimate of a binary-outcome model."""

    link: Link
    coefficients: dict[str, float]
    standard_errors: dict[str, float]
    t_stats: dict[str, float]
    log_likelihood: float
    n_used: int
    dropped: list[DroppedGroup]
    converged: bool
    iterations: int
    loglik_path: list[float]


def _logit_parts(eta: np.ndarray, y: np.ndarray):
    loglik = float(np.sum(y * eta - np.logaddexp(0.0, eta)))
    p = expit(eta)
    return loglik, y - p, p * (1.0 - p)


def _probit_parts(eta: np.ndarray, y: np.ndarray):
    logcdf = norm.logcdf(eta)
    logsf = norm.logsf(eta)
    loglik = float(np.sum(y * logcdf + (1.0 - y) * logsf))
    logpdf = norm.logpdf(eta)
    lam_pos = np.exp(logpdf - logcdf)  # inverse Mills ratio phi/Phi
    lam_neg = np.exp(logpdf - logsf)
    score = y * lam_pos - (1.0 - y) * lam_neg
    weights = y * lam_pos * (eta + lam_pos) + (1.0 - y) * lam_neg * (lam_neg - eta)
    return loglik, score, weights


_PARTS = {Link.LOGIT: _logit_parts, Link.PROBIT: _probit_parts}


def log_likelihood(
    design: DesignMatrix, link: Link | str, beta: np.ndarray
) -> float:
    """Log-likelihood at an arbitrary coefficient vector."""
    parts = _PARTS[Link(link)]
    return parts(design.matrix @ beta, design.outcome)[0]


def score_vector(
    design: DesignMatrix, link: Link | str, beta: np.ndarray
) -> np.ndarray:
    """Analytic gradient of the log-likelihood."""
    parts = _PARTS[Link(link)]
    _, score, _ = parts(design.matrix @ beta, design.outcome)
    return design.matrix.T @ score


def fit_glm(design: DesignMatrix, link: Link | str = Link.LOGIT) -> GlmFit:
    """Newton-Raphson maximum likelihood for logit or probit.

    Starts from the zero vector; step-halving keeps the log-likelihood
    monotone.  Convergence means the largest score entry falls below
    1e-8 or the coefficient step below 1e-10.  A non-converged fit is
    returned with `converged` False rather than raised.
    """
    link = Link(link)
    X = design.matrix
    y = design.outcome
    n, k = X.shape
    if k == 0:
        raise DegenerateDesignError("design has no columns")
    if n < k + 1:
        raise DegenerateDesignError(f"{n} rows cannot identify {k} coefficients")
    if not (np.any(y == 0.0) and np.any(y == 1.0)):
        raise DegenerateDesignError("outcome must contain both zeros and ones")
    if np.linalg.matrix_rank(X) < k:
        raise RankDeficientError("design matrix is rank deficient")

    parts = _PARTS[link]
    beta = np.zeros(k)
    loglik, score, weights = parts(X @ beta, y)
    path = [loglik]
    converged = False
    iterations = 0

    for iterations in range(1, MAX_ITERATIONS + 1):
        gradient = X.T @ score
        if np.max(np.abs(gradient)) < SCORE_TOLERANCE:
            converged = True
            iterations -= 1
            break
        information = X.T @ (weights[:, None] * X)
        try:
            step = np.linalg.solve(information, gradient)
        except np.linalg.LinAlgError:
            raise RankDeficientError("observed information is singular") from None

        scale = 1.0
        improved = False
        for _ in range(MAX_STEP_HALVINGS + 1):
            candidate = beta + scale * step
            cand_loglik, cand_score, cand_weights = parts(X @ candidate, y)
            if cand_loglik >= loglik:
                improved = True
                break
            scale *= 0.5
        if not improved:
            break  # likelihood cannot be improved; report as-is

        step_size = np.max(np.abs(scale * step))
        beta = candidate
        loglik, score, weights = cand_loglik, cand_score, cand_weights
        path.append(loglik)

        peak = np.max(np.abs(beta))
        if peak > DIVERGENCE_LIMIT:
            runaway = [
                design.columns[j]
                for j in range(k)
                if abs(beta[j]) > DIVERGENCE_LIMIT
            ]
            raise PerfectSeparationError(runaway)
        if step_size < STEP_TOLERANCE:
            converged = True
            break

    information = X.T @ (weights[:, None] * X)
    try:
        covariance = np.linalg.inv(information)
    except np.linalg.LinAlgError:
        raise RankDeficientError("observed information is singular") from None
    se = np.sqrt(np.diag(covariance))

    names = design.columns
    coefficients = {name: float(b) for name, b in zip(names, beta)}
    standard_errors = {name: float(s) for name, s in zip(names, se)}
    t_stats = {
        name: (coefficients[name] / standard_errors[name])
        if standard_errors[name] > 0
        else math.inf * np.sign(coefficients[name])
        for name in names
    }
    return GlmFit(
        link=link,
        coefficients=coefficients,
        standard_errors=standard_errors,
        t_stats=t_stats,
        log_likelihood=loglik,
        n_used=n,
        dropped=list(design.dropped),
        converged=converged,
        iterations=iterations,
        loglik_path=path,
    )


def predict_probability(fit: GlmFit, covariates: Mapping[str, float]) -> float:
    """Probability at the given covariate values.

    Unmentioned covariates sit at zero, i.e. at the reference category;
    the intercept is always included.
    """
    index = fit.coefficients.get("intercept", 0.0)
    for name, value in covariates.items():
        if name == "intercept" or name not in fit.coefficients:
            raise UnknownCovariateError(f"covariate {name!r} not in fit")
        index += fit.coefficients[name] * value
    if fit.link is Link.LOGIT:
        return float(expit(index))
    return float(norm.cdf(index))


# ---- citation breaks -----------------------------------------------------


@dataclass(frozen=True)
class CitationSeries:
    """Annual citation counts around an academic relative's award."""

    scholar: str
    observations: tuple[tuple[int, float], ...]
    relative_award_year: int

    def validate(self) -> None:
        years = [year for year, _ in self.observations]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValidationError(f"{self.scholar}: years must strictly increase")
        if any(count < 0 for _, count in self.observations):
            raise ValidationError(f"{self.scholar}: negative citation count")


@dataclass(frozen=True)
class CitationBreak:
    """Trend regression with a post-award shift dummy."""

    trend: float
    break_coef: float
    break_t: float

    @property
    def significant(self) -> bool:
        return abs(self.break_t) > 1.96


def citation_break(series: CitationSeries) -> CitationBreak:
    """OLS of citations on a linear trend and a post-award dummy.

    The dummy switches on in the year after the relative's award; the
    award year itself is pre-break.  Classical standard errors.
    """
    series.validate()
    years = np.array([year for year, _ in series.observations], dtype=float)
    counts = np.array([count for _, count in series.observations], dtype=float)
    n = years.size
    if n < 4:
        raise DegenerateDesignError(f"{n} observations; need at least 4")
    post = (years >= series.relative_award_year + 1).astype(float)
    if post.sum() == 0 or post.sum() == n:
        raise DegenerateDesignError("no observations on one side of the break")

    X = np.column_stack([np.ones(n), years - years.mean(), post])
    if np.linalg.matrix_rank(X) < 3:
        raise DegenerateDesignError("collinear trend and break regressors")
    coef, _, _, _ = np.linalg.lstsq(X, counts, rcond=None)
    residuals = counts - X @ coef
    rss = float(residuals @ residuals)
    sigma2 = rss / (n - 3)
    covariance = sigma2 * np.linalg.inv(X.T @ X)
    break_coef = float(coef[2])
    break_var = float(covariance[2, 2])

    # Exact fits leave no residual variance; report t = 0 for a zero
    # shift and +/- infinity for a real one instead of 0/0 noise.
    scale = 1e-12 * (1.0 + float(counts @ counts))
    if break_var <= scale:
        if abs(break_coef) <= math.sqrt(scale):
            break_t = 0.0
        else:
            break_t = math.copysign(math.inf, break_coef)
    else:
        break_t = break_coef / math.sqrt(break_var)
    return CitationBreak(trend=float(coef[1]), break_coef=break_coef, break_t=break_t)


# ---- won-after relation lists --------------------------------------------


class WonAfterPair(NamedTuple):
    later_winner: str
    earlier_winner: str
    later_year: int
    earlier_year: int


RELATION_KINDS = ("professor", "student", "peer")


def won_after(
    graph: GenealogyGraph, kind: str, max_peer_degree: int = 2
) -> list[WonAfterPair]:
    """Winner pairs where an academic relative won first.

    Kind "professor" pairs a winner with every earlier-winning ancestor,
    "student" with every earlier-winning descendant, and "peer" with
    every earlier winner sharing at least one (grand)professor.  Sorted
    by the later award year.
    """
    if kind not in RELATION_KINDS:
        raise ValueError(f"kind must be one of {RELATION_KINDS}")
    laureates = sorted(
        (s for s in graph.scholars.values() if s.win_year is not None),
        key=lambda s: (s.win_year, s.id),
    )
    pairs: list[WonAfterPair] = []
    for later in laureates:
        if kind == "professor":
            related = all_distances(graph, later.id, Direction.TOWARD_ANCESTORS)
        elif kind == "student":
            related = all_distances(graph, later.id, Direction.TOWARD_DESCENDANTS)
        for earlier in laureates:
            if earlier.win_year >= later.win_year:
                break  # laureates are sorted by award year
            if kind == "peer":
                linked = peer_proximity(graph, later.id, earlier.id, max_peer_degree) > 0
            else:
                linked = earlier.id in related and earlier.id != later.id
            if linked:
                pairs.append(
                    WonAfterPair(later.id, earlier.id, later.win_year, earlier.win_year)
                )
    pairs.sort(key=lambda p: (p.later_year, p.later_winner, p.earlier_year, p.earlier_winner))
    return pairs
