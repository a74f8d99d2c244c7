"""Independent brute-force reference implementations for the tests.

Everything here works on raw edge-pair lists and plain arrays, with its
own traversal and estimation code, so agreement with the package is a
two-route check rather than a tautology.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.stats import norm


# ---- graph traversals on raw edge lists ----------------------------------


def oracle_distances(
    edges: list[tuple[str, str]], start: str, direction: str
) -> dict[str, int]:
    """Hop counts from `start` by exhaustive frontier expansion.

    `direction` "up" walks student -> professor, "down" walks
    professor -> student.  Missing keys mean unreachable.
    """
    step: dict[str, set[str]] = {}
    for professor, student in edges:
        if direction == "up":
            step.setdefault(student, set()).add(professor)
        else:
            step.setdefault(professor, set()).add(student)
    found = {start: 0}
    frontier = {start}
    hops = 0
    while frontier:
        hops += 1
        frontier = {
            neighbour
            for node in frontier
            for neighbour in step.get(node, ())
            if neighbour not in found
        }
        for neighbour in frontier:
            found[neighbour] = hops
    return found


def oracle_exact_ancestors(
    edges: list[tuple[str, str]], node: str, degree: int
) -> set[str]:
    """Walk exactly `degree` professor edges, keeping the whole frontier."""
    current = {node}
    for _ in range(degree):
        current = {
            professor for professor, student in edges if student in current
        }
    return current


def oracle_vertical_closeness(
    edges: list[tuple[str, str]],
    node: str,
    members: set[str],
    count: int,
    direction: str,
    exponent: float = -1.0,
) -> float:
    distances = oracle_distances(edges, node, direction)
    total = 0.0
    for member in sorted(members):
        if member == node:
            continue
        hops = distances.get(member)
        if hops is None:
            if exponent > 0:
                return 0.0  # an unreachable member makes the mean infinite
            continue
        total += float(hops) ** exponent
    mean = total / count
    if mean == 0.0:
        return 0.0
    return mean ** (-1.0 / exponent)


def oracle_peer_value(
    edges: list[tuple[str, str]], first: str, second: str, max_degree: int
) -> float:
    best = 0.0
    for degree in range(1, max_degree + 1):
        own = oracle_exact_ancestors(edges, first, degree)
        other = oracle_exact_ancestors(edges, second, degree)
        union = own | other
        if union:
            best = max(best, len(own & other) / len(union) / degree)
    return best


def oracle_crosscloseness(
    edges: list[tuple[str, str]],
    node: str,
    members: set[str],
    count: int,
    max_degree: int = 2,
) -> float:
    total = 0.0
    for member in sorted(members):
        if member == node:
            continue
        total += oracle_peer_value(edges, node, member, max_degree)
    return total / count


# ---- likelihood grids and gradients --------------------------------------

GRID_STEP = 1e-3
GRID_LO = -10.0
GRID_HI = 10.0


def loglik_at(matrix: np.ndarray, y: np.ndarray, beta: np.ndarray, link: str) -> float:
    eta = matrix @ beta
    if link == "logit":
        return float(y @ eta - np.logaddexp(0.0, eta).sum())
    return float((y * norm.logcdf(eta) + (1.0 - y) * norm.logsf(eta)).sum())


def grid_single_mle(y: np.ndarray, x: np.ndarray, link: str) -> float:
    """Exhaustive 1e-3 grid over [-10, 10] for one coefficient, no intercept."""
    betas = np.arange(GRID_LO, GRID_HI + GRID_STEP / 2, GRID_STEP)
    eta = np.outer(betas, x)
    if link == "logit":
        ll = eta @ y - np.logaddexp(0.0, eta).sum(axis=1)
    else:
        ll = (y * norm.logcdf(eta) + (1.0 - y) * norm.logsf(eta)).sum(axis=1)
    return float(betas[np.argmax(ll)])


def grid_coordinate_mle(
    matrix: np.ndarray, y: np.ndarray, beta: np.ndarray, index: int, link: str
) -> float:
    """Exhaustive grid over one coordinate with the others held fixed."""
    betas = np.arange(GRID_LO, GRID_HI + GRID_STEP / 2, GRID_STEP)
    base = matrix @ beta - matrix[:, index] * beta[index]
    eta = base[None, :] + np.outer(betas, matrix[:, index])
    if link == "logit":
        ll = eta @ y - np.logaddexp(0.0, eta).sum(axis=1)
    else:
        ll = (y * norm.logcdf(eta) + (1.0 - y) * norm.logsf(eta)).sum(axis=1)
    return float(betas[np.argmax(ll)])


def fd_gradient(matrix: np.ndarray, y: np.ndarray, beta: np.ndarray,
                link: str, step: float = 1e-5) -> np.ndarray:
    gradient = np.zeros_like(beta)
    for j in range(beta.size):
        bump = np.zeros_like(beta)
        bump[j] = step
        gradient[j] = (
            loglik_at(matrix, y, beta + bump, link)
            - loglik_at(matrix, y, beta - bump, link)
        ) / (2.0 * step)
    return gradient


def gradients_agree(analytic: np.ndarray, numeric: np.ndarray,
                    tolerance: float = 1e-4) -> bool:
    scale = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(numeric)))
    return bool(np.all(np.abs(analytic - numeric) <= tolerance * scale))


# ---- exact-rational OLS --------------------------------------------------


def fraction_ols(rows: list[list[Fraction]], y: list[Fraction]):
    """Solve least squares by normal equations over exact rationals.

    Returns (coefficients, residual sum of squares), both exact.
    """
    k = len(rows[0])
    xtx = [[sum(r[a] * r[b] for r in rows) for b in range(k)] for a in range(k)]
    xty = [sum(r[a] * yi for r, yi in zip(rows, y)) for a in range(k)]
    # Gauss-Jordan with partial pivoting on exact fractions
    aug = [xtx[i] + [xty[i]] for i in range(k)]
    for col in range(k):
        pivot = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        factor = aug[col][col]
        aug[col] = [value / factor for value in aug[col]]
        for row in range(k):
            if row != col and aug[row][col] != 0:
                scale = aug[row][col]
                aug[row] = [a - scale * b for a, b in zip(aug[row], aug[col])]
    coefficients = [aug[i][k] for i in range(k)]
    rss = Fraction(0)
    for r, yi in zip(rows, y):
        fitted = sum(c * value for c, value in zip(coefficients, r))
        rss += (yi - fitted) ** 2
    return coefficients, rss


def fraction_break_oracle(years: list[int], counts: list[int], break_year: int):
    """Exact trend-plus-shift OLS: (trend, break coefficient, break variance).

    The variance is the classical sigma^2 * (X'X)^-1 diagonal entry for
    the shift dummy, as a Fraction (or None when n = 3).
    """
    n = len(years)
    mean_year = Fraction(sum(years), n)
    rows = [
        [Fraction(1), Fraction(year) - mean_year,
         Fraction(1 if year >= break_year + 1 else 0)]
        for year in years
    ]
    y = [Fraction(count) for count in counts]
    coefficients, rss = fraction_ols(rows, y)
    if n <= 3:
        return coefficients[1], coefficients[2], None
    sigma2 = rss / (n - 3)
    # diagonal entry of (X'X)^-1 for the dummy column via cofactor solve
    k = 3
    xtx = [[sum(r[a] * r[b] for r in rows) for b in range(k)] for a in range(k)]
    aug = [xtx[i] + [Fraction(1 if i == 2 else 0)] for i in range(k)]
    for col in range(k):
        pivot = next(r for r in range(col, k) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        factor = aug[col][col]
        aug[col] = [value / factor for value in aug[col]]
        for row in range(k):
            if row != col and aug[row][col] != 0:
                scale = aug[row][col]
                aug[row] = [a - scale * b for a, b in zip(aug[row], aug[col])]
    inverse_diag = aug[2][3]
    return coefficients[1], coefficients[2], sigma2 * inverse_diag


# ---- random DAG construction for equivalence sweeps ----------------------


def random_dag(rng: np.random.Generator, max_nodes: int = 30, max_edges: int = 60):
    """A random DAG as (node ids, edge pairs); edges follow index order."""
    n = int(rng.integers(2, max_nodes + 1))
    ids = [f"v{i:02d}" for i in range(n)]
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = int(rng.integers(0, min(max_edges, len(all_pairs)) + 1))
    chosen = rng.choice(len(all_pairs), size=m, replace=False) if m else []
    edges = [(ids[all_pairs[k][0]], ids[all_pairs[k][1]]) for k in chosen]
    return ids, sorted(edges)
