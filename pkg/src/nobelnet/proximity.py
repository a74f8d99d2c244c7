"""Prize-proximity measures on the genealogy network.

Three directional measures quantify how close a scholar stands to the
previous prize winners:

* outcloseness looks up the tree: one point for a winning professor,
  half a point for a winning grandprofessor, a third for a winning
  great-grandprofessor, and so on, the total divided by the number of
  previous winners.  Formally it is the inverse of the power mean (with
  exponent -1, the harmonic mean) of the shortest ancestor-direction
  distances to the winners, which stays finite when some winners are
  not ancestors at all: an unreachable winner simply contributes zero.
* incloseness is the same score taken down the tree, over winning
  students, grandstudents, and so on.
* crosscloseness scores shared ancestry within a generation.  The
  overlap of two scholars' professor sets (or grandprofessor sets) is
  measured by the Jaccard index, which is one for full siblings; a peer
  counts at their closest shared generation, with the overlap at
  generation n divided by n.

Because the winner set grows over time, raw scores are not comparable
across years; `relative_scale` rescales each year's scores so the
closest candidate scores exactly one.

All operations are pure functions of an immutable graph.  Sums run in
ascending laureate-id order so results do not depend on evaluation
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Iterable, Mapping

from .errors import EmptyInputError, SameNodeError
from .genealogy import (
    Direction,
    GenealogyGraph,
    Scholar,
    all_distances,
    ancestor_set,
)

#: Names of the proximity measures, in canonical column order.
MEASURES = (
    "prof",
    "student",
    "peer",
    "prof_living",
    "prof_deceased",
    "prof_recent",
    "prof_earlier",
    "peer_recent",
    "peer_earlier",
)


@dataclass(frozen=True)
class NobelSet:
    """The winners strictly before a panel year.

    `count` is the divisor of every per-year score.  Sub-measures over a
    partition of the members (living/deceased, recent/earlier) keep this
    full count, so the parts add up to the whole.
    """

    year: int
    members: frozenset[str]

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ProximityVector:
    """All proximity scores of one scholar in one panel year.

    Each measure comes as the raw score and its within-year relative
    value in [0, 1].
    """

    scholar: str
    year: int
    prof_raw: float = 0.0
    prof_rel: float = 0.0
    student_raw: float = 0.0
    student_rel: float = 0.0
    peer_raw: float = 0.0
    peer_rel: float = 0.0
    prof_living_raw: float = 0.0
    prof_living_rel: float = 0.0
    prof_deceased_raw: float = 0.0
    prof_deceased_rel: float = 0.0
    prof_recent_raw: float = 0.0
    prof_recent_rel: float = 0.0
    prof_earlier_raw: float = 0.0
    prof_earlier_rel: float = 0.0
    peer_recent_raw: float = 0.0
    peer_recent_rel: float = 0.0
    peer_earlier_raw: float = 0.0
    peer_earlier_rel: float = 0.0

    @staticmethod
    def column_names() -> tuple[str, ...]:
        return tuple(f.name for f in fields(ProximityVector))[2:]


def _mean_power_distance(
    distances: Mapping[str, int],
    node: str,
    targets: NobelSet,
    exponent: float,
    members: Iterable[str] | None,
) -> float:
    """(1/N) * sum of d^h over the chosen members; inf if divergent.

    The node itself is skipped should it ever appear among the targets
    (panel construction never puts a winner in their own candidate rows,
    so this is purely defensive).
    """
    if exponent == 0:
        raise ValueError("exponent must be non-zero")
    if targets.count < 1:
        raise EmptyInputError("target set has no members")
    chosen = targets.members if members is None else members
    total = 0.0
    for member in sorted(chosen):
        if member == node:
            continue
        d = distances.get(member)
        if d is None:
            if exponent > 0:
                return math.inf
            continue  # unreachable: d^h vanishes for negative h
        total += float(d) ** exponent
    return total / targets.count


def holder_distance(
    graph: GenealogyGraph,
    node: str,
    targets: NobelSet,
    exponent: float = -1.0,
    direction: Direction = Direction.TOWARD_ANCESTORS,
    members: Iterable[str] | None = None,
) -> float:
    """Power-mean distance from `node` to the target winners.

    Exponent 1 gives the arithmetic mean (infinite unless every winner
    is reachable), -1 the harmonic mean, which skews towards the closer
    relationships and is finite on disconnected parts of the network.
    """
    distances = all_distances(graph, node, direction)
    mean = _mean_power_distance(distances, node, targets, exponent, members)
    if mean == math.inf:
        return math.inf
    if mean == 0.0:  # negative exponent, nothing reachable
        return math.inf
    return mean ** (1.0 / exponent)


def _closeness(
    distances: Mapping[str, int],
    node: str,
    targets: NobelSet,
    exponent: float,
    members: Iterable[str] | None,
) -> float:
    mean = _mean_power_distance(distances, node, targets, exponent, members)
    if mean == math.inf:
        return 0.0
    if mean == 0.0:
        return 0.0
    # Inverse of the power mean; for exponent -1 this is exactly the
    # plain sum of reciprocal distances over the member count.
    return mean ** (-1.0 / exponent)


def outcloseness(
    graph: GenealogyGraph,
    node: str,
    targets: NobelSet,
    members: Iterable[str] | None = None,
    exponent: float = -1.0,
) -> float:
    """Closeness to winners among the scholar's academic ancestors.

    Zero for scholars with no winners in their ancestry.  `members`
    restricts the sum to a subset of the winners while keeping the full
    count as divisor.
    """
    distances = all_distances(graph, node, Direction.TOWARD_ANCESTORS)
    return _closeness(distances, node, targets, exponent, members)


def incloseness(
    graph: GenealogyGraph,
    node: str,
    targets: NobelSet,
    members: Iterable[str] | None = None,
    exponent: float = -1.0,
) -> float:
    """Closeness to winners among the scholar's academic descendants."""
    distances = all_distances(graph, node, Direction.TOWARD_DESCENDANTS)
    return _closeness(distances, node, targets, exponent, members)


def horizontal_proximity(
    graph: GenealogyGraph, first: str, second: str, degree: int
) -> float:
    """Jaccard overlap of the two scholars' degree-`degree` ancestor sets.

    One for full siblings (degree 1) or double first cousins (degree 2);
    zero when the scholars share no ancestors at that generation or
    either has none recorded.
    """
    if first == second:
        raise SameNodeError(f"horizontal proximity of {first!r} with itself")
    own = ancestor_set(graph, first, degree)
    other = ancestor_set(graph, second, degree)
    union = own | other
    if not union:
        return 0.0
    return len(own & other) / len(union)


def peer_proximity(
    graph: GenealogyGraph, first: str, second: str, max_degree: int = 2
) -> float:
    """Overlap at the closest shared generation, discounted by depth.

    The maximum over generations n of (degree-n overlap) / n, so a peer
    counts once, at their nearest shared generation.
    """
    best = 0.0
    for degree in range(1, max_degree + 1):
        best = max(best, horizontal_proximity(graph, first, second, degree) / degree)
    return best


def crosscloseness(
    graph: GenealogyGraph,
    node: str,
    targets: NobelSet,
    max_degree: int = 2,
    members: Iterable[str] | None = None,
) -> float:
    """Closeness to winners who came out of the same (grand)professors.

    The same inverse-harmonic shape as the vertical measures, with the
    distance to a peer read as n divided by the generation-n overlap:
    the per-winner contribution is peer_proximity, winners with no
    shared ancestry contribute zero.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    graph._require(node)
    if targets.count < 1:
        raise EmptyInputError("target set has no members")
    chosen = targets.members if members is None else members
    total = 0.0
    for member in sorted(chosen):
        if member == node:
            continue
        total += peer_proximity(graph, node, member, max_degree)
    return total / targets.count


def relative_scale(values: Mapping[str, float]) -> dict[str, float]:
    """Divide each scholar's score by the year's maximum.

    The closest scholar scores one; if every score is zero the division
    is skipped and all outputs stay zero.
    """
    if not values:
        raise EmptyInputError("relative_scale needs at least one value")
    if any(v < 0 for v in values.values()):
        raise ValueError("scores must be non-negative")
    top = max(values.values())
    if top == 0.0:
        return {scholar: 0.0 for scholar in values}
    return {scholar: value / top for scholar, value in values.items()}


def split_living(
    register: Mapping[str, Scholar], targets: NobelSet
) -> tuple[frozenset[str], frozenset[str]]:
    """Partition the winners into (living, deceased) at the panel year."""
    living = frozenset(
        m for m in targets.members if register[m].alive_at(targets.year)
    )
    return living, targets.members - living


def split_recent(
    register: Mapping[str, Scholar], targets: NobelSet, window: int = 10
) -> tuple[frozenset[str], frozenset[str]]:
    """Partition the winners into (recent, earlier) by award year.

    Recent means the award came within the trailing `window` calendar
    years of the panel year.
    """
    recent = frozenset(
        m for m in targets.members if targets.year - register[m].win_year <= window
    )
    return recent, targets.members - recent


class ProximityCache:
    """Memoises the static per-scholar traversals behind the measures.

    Distances and ancestor overlaps do not depend on the panel year, so
    one cache serves a whole panel run.
    """

    def __init__(self, graph: GenealogyGraph, max_degree: int = 2) -> None:
        self.graph = graph
        self.max_degree = max_degree
        self._distances: dict[tuple[str, Direction], dict[str, int]] = {}
        self._peer: dict[tuple[str, str], float] = {}

    def distances(self, node: str, direction: Direction) -> dict[str, int]:
        key = (node, direction)
        if key not in self._distances:
            self._distances[key] = all_distances(self.graph, node, direction)
        return self._distances[key]

    def peer(self, first: str, second: str) -> float:
        key = (first, second) if first <= second else (second, first)
        if key not in self._peer:
            self._peer[key] = peer_proximity(
                self.graph, key[0], key[1], self.max_degree
            )
        return self._peer[key]


def year_proximities(
    graph: GenealogyGraph,
    candidates: Iterable[str],
    targets: NobelSet,
    exponent: float = -1.0,
    max_peer_degree: int = 2,
    recent_window: int = 10,
    cache: ProximityCache | None = None,
) -> dict[str, ProximityVector]:
    """All nine measures, raw and year-rescaled, for one year's candidates."""
    roster = sorted(set(candidates))
    if not roster:
        return {}
    if cache is None or cache.max_degree != max_peer_degree:
        cache = ProximityCache(graph, max_peer_degree)
    register = graph.scholars
    living, deceased = split_living(register, targets)
    recent, earlier = split_recent(register, targets, recent_window)

    raw: dict[str, dict[str, float]] = {measure: {} for measure in MEASURES}
    for scholar in roster:
        up = cache.distances(scholar, Direction.TOWARD_ANCESTORS)
        down = cache.distances(scholar, Direction.TOWARD_DESCENDANTS)

        def vertical(distances, members=None):
            return _closeness(distances, scholar, targets, exponent, members)

        def horizontal(members=None):
            chosen = targets.members if members is None else members
            total = 0.0
            for member in sorted(chosen):
                if member == scholar:
                    continue
                total += cache.peer(scholar, member)
            return total / targets.count

        raw["prof"][scholar] = vertical(up)
        raw["student"][scholar] = vertical(down)
        raw["peer"][scholar] = horizontal()
        raw["prof_living"][scholar] = vertical(up, living)
        raw["prof_deceased"][scholar] = vertical(up, deceased)
        raw["prof_recent"][scholar] = vertical(up, recent)
        raw["prof_earlier"][scholar] = vertical(up, earlier)
        raw["peer_recent"][scholar] = horizontal(recent)
        raw["peer_earlier"][scholar] = horizontal(earlier)

    # Each measure is rescaled on its own per-year maximum.
    rel = {measure: relative_scale(raw[measure]) for measure in MEASURES}

    vectors = {}
    for scholar in roster:
        values: dict[str, float] = {}
        for measure in MEASURES:
            values[f"{measure}_raw"] = raw[measure][scholar]
            values[f"{measure}_rel"] = rel[measure][scholar]
        vectors[scholar] = ProximityVector(scholar=scholar, year=targets.year, **values)
    return vectors
