"""Directed acyclic professor-student genealogy network.

The network is a polytree over :class:`Scholar` records: an edge points
from a professor to their (PhD or informally mentored) student.  The
graph is immutable once built, keeps forward (professor -> students) and
reverse (student -> professors) adjacency in sync, and exposes the
traversals the proximity measures are built on: exact-generation
ancestor sets, shortest directed distances, and depth-limited descendant
subgraphs.

Edges carry no dates; time enters the analysis only through award years.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    CycleDetectedError,
    DuplicateIdError,
    UnknownEndpointError,
    UnknownNodeError,
    ValidationError,
)

#: Distance value for node pairs with no directed path between them.
UNREACHABLE = float("inf")


class Gender(str, enum.Enum):
    FEMALE = "female"
    MALE = "male"
    UNKNOWN = "unknown"


class Source(str, enum.Enum):
    """How a scholar entered the candidate register."""

    LAUREATE = "laureate"
    CLARIVATE = "clarivate"
    IDEAS_REPEC = "ideas_repec"
    AD_HOC = "ad_hoc"


class Direction(enum.Enum):
    """Orientation of a directed traversal."""

    TOWARD_ANCESTORS = "toward_ancestors"
    TOWARD_DESCENDANTS = "toward_descendants"


@dataclass(frozen=True)
class Scholar:
    """One economist in the register: laureate or candidate.

    Ids are case-sensitive and whitespace-trimmed.  ``death_year`` is
    None for scholars alive through the end of the study window.
    """

    id: str
    name: str
    birth_year: int
    death_year: int | None = None
    win_year: int | None = None
    gender: Gender = Gender.UNKNOWN
    alma_mater: str = ""
    field: str = ""
    source: Source = Source.AD_HOC

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", self.id.strip())

    def validate(self) -> None:
        """Raise ValidationError if any per-record invariant fails."""
        if not self.id:
            raise ValidationError("scholar id must be non-empty")
        if self.death_year is not None and not self.birth_year < self.death_year:
            raise ValidationError(
                f"{self.id}: birth_year {self.birth_year} must precede "
                f"death_year {self.death_year}"
            )
        if self.win_year is not None:
            if self.win_year < self.birth_year + 20:
                raise ValidationError(
                    f"{self.id}: win_year {self.win_year} implausibly early "
                    f"for birth_year {self.birth_year}"
                )
            # The award can be announced in the year after death
            # (it is never awarded posthumously beyond that).
            if self.death_year is not None and self.win_year > self.death_year + 1:
                raise ValidationError(
                    f"{self.id}: win_year {self.win_year} after "
                    f"death_year {self.death_year} + 1"
                )

    def alive_at(self, year: int) -> bool:
        """True if the scholar lived during (any part of) `year`."""
        return self.death_year is None or self.death_year >= year


@dataclass(frozen=True)
class MentorEdge:
    """A professor -> student advisory relationship."""

    professor_id: str
    student_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "professor_id", self.professor_id.strip())
        object.__setattr__(self, "student_id", self.student_id.strip())

    def validate(self) -> None:
        if self.professor_id == self.student_id:
            raise ValidationError(f"self-edge on {self.professor_id!r}")


class GenealogyGraph:
    """Validated, immutable professor-student network.

    Use :func:`build_graph` to construct one; the constructor assumes
    already-validated inputs.
    """

    __slots__ = ("_scholars", "_students_of", "_professors_of", "_edge_count")

    def __init__(
        self,
        scholars: Mapping[str, Scholar],
        students_of: Mapping[str, tuple[str, ...]],
        professors_of: Mapping[str, tuple[str, ...]],
        edge_count: int,
    ) -> None:
        self._scholars = dict(scholars)
        self._students_of = dict(students_of)
        self._professors_of = dict(professors_of)
        self._edge_count = edge_count

    # ---- basic queries ---------------------------------------------------

    @property
    def scholars(self) -> Mapping[str, Scholar]:
        return self._scholars

    @property
    def node_count(self) -> int:
        return len(self._scholars)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __contains__(self, scholar_id: str) -> bool:
        return scholar_id in self._scholars

    def __iter__(self) -> Iterator[str]:
        return iter(self._scholars)

    def scholar(self, scholar_id: str) -> Scholar:
        try:
            return self._scholars[scholar_id]
        except KeyError:
            raise UnknownNodeError(f"unknown scholar id {scholar_id!r}") from None

    def students_of(self, scholar_id: str) -> tuple[str, ...]:
        self._require(scholar_id)
        return self._students_of.get(scholar_id, ())

    def professors_of(self, scholar_id: str) -> tuple[str, ...]:
        self._require(scholar_id)
        return self._professors_of.get(scholar_id, ())

    def edges(self) -> Iterator[MentorEdge]:
        """All edges, ordered by (professor, student) id."""
        for professor_id in sorted(self._students_of):
            for student_id in sorted(self._students_of[professor_id]):
                yield MentorEdge(professor_id, student_id)

    def _require(self, scholar_id: str) -> None:
        if scholar_id not in self._scholars:
            raise UnknownNodeError(f"unknown scholar id {scholar_id!r}")

    def _adjacency(self, direction: Direction) -> Mapping[str, tuple[str, ...]]:
        if direction is Direction.TOWARD_ANCESTORS:
            return self._professors_of
        return self._students_of


def build_graph(
    scholars: Iterable[Scholar], edges: Iterable[MentorEdge]
) -> GenealogyGraph:
    """Validate records and assemble the genealogy graph.

    Raises DuplicateIdError for repeated scholar ids, UnknownEndpointError
    for edges naming missing scholars, CycleDetectedError (with one
    offending cycle) if the edges are not acyclic, and ValidationError
    for per-record invariant failures, including duplicate edges.
    """
    register: dict[str, Scholar] = {}
    for scholar in scholars:
        scholar.validate()
        if scholar.id in register:
            raise DuplicateIdError(f"duplicate scholar id {scholar.id!r}")
        register[scholar.id] = scholar

    students_of: dict[str, list[str]] = {}
    professors_of: dict[str, list[str]] = {}
    seen_pairs: set[tuple[str, str]] = set()
    edge_count = 0
    for edge in edges:
        edge.validate()
        for endpoint in (edge.professor_id, edge.student_id):
            if endpoint not in register:
                raise UnknownEndpointError(
                    f"edge {edge.professor_id!r} -> {edge.student_id!r} "
                    f"names unknown scholar {endpoint!r}"
                )
        pair = (edge.professor_id, edge.student_id)
        if pair in seen_pairs:
            raise ValidationError(
                f"duplicate edge {edge.professor_id!r} -> {edge.student_id!r}"
            )
        seen_pairs.add(pair)
        students_of.setdefault(edge.professor_id, []).append(edge.student_id)
        professors_of.setdefault(edge.student_id, []).append(edge.professor_id)
        edge_count += 1

    _check_acyclic(register, students_of)

    return GenealogyGraph(
        register,
        {k: tuple(sorted(v)) for k, v in students_of.items()},
        {k: tuple(sorted(v)) for k, v in professors_of.items()},
        edge_count,
    )


def _check_acyclic(
    register: Mapping[str, Scholar], students_of: Mapping[str, list[str]]
) -> None:
    """Kahn's algorithm; on failure, report one concrete cycle."""
    in_degree = {node: 0 for node in register}
    for students in students_of.values():
        for student in students:
            in_degree[student] += 1
    queue = deque(node for node, degree in in_degree.items() if degree == 0)
    processed = 0
    while queue:
        node = queue.popleft()
        processed += 1
        for student in students_of.get(node, ()):
            in_degree[student] -= 1
            if in_degree[student] == 0:
                queue.append(student)
    if processed == len(register):
        return

    # Every leftover node keeps a predecessor among the leftovers, so
    # walking predecessors must revisit a node, closing a cycle.
    remnant = {node for node, degree in in_degree.items() if degree > 0}
    predecessors: dict[str, list[str]] = {node: [] for node in remnant}
    for professor, students in students_of.items():
        if professor in remnant:
            for student in students:
                if student in remnant:
                    predecessors[student].append(professor)
    trail = [min(remnant)]
    positions = {trail[0]: 0}
    while True:
        nxt = min(predecessors[trail[-1]])
        if nxt in positions:
            # Trail was walked against the edges; flip it for reporting.
            cycle = list(reversed(trail[positions[nxt] :] + [nxt]))
            raise CycleDetectedError(cycle)
        positions[nxt] = len(trail)
        trail.append(nxt)


def ancestor_set(graph: GenealogyGraph, node: str, degree: int) -> set[str]:
    """Scholars reachable by walking exactly `degree` professor edges.

    Degree 1 gives the professors, degree 2 the grandprofessors, and so
    on.  A scholar reachable along several length-`degree` paths appears
    once.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    graph._require(node)
    frontier = {node}
    for _ in range(degree):
        frontier = {
            professor
            for member in frontier
            for professor in graph.professors_of(member)
        }
        if not frontier:
            break
    return frontier


def directed_distance(
    graph: GenealogyGraph, from_id: str, to_id: str, direction: Direction
) -> float:
    """Length of the shortest directed path, or UNREACHABLE.

    With TOWARD_ANCESTORS the path runs against the edges (student to
    professor); with TOWARD_DESCENDANTS it follows them.  The distance
    from a node to itself is 0.
    """
    graph._require(from_id)
    graph._require(to_id)
    if from_id == to_id:
        return 0
    adjacency = graph._adjacency(direction)
    seen = {from_id}
    queue = deque([(from_id, 0)])
    while queue:
        node, hops = queue.popleft()
        for neighbour in adjacency.get(node, ()):
            if neighbour == to_id:
                return hops + 1
            if neighbour not in seen:
                seen.add(neighbour)
                queue.append((neighbour, hops + 1))
    return UNREACHABLE


def all_distances(
    graph: GenealogyGraph, from_id: str, direction: Direction
) -> dict[str, int]:
    """BFS distances from `from_id` to every reachable node.

    One traversal serves a whole target set; unreachable nodes are simply
    absent from the result.
    """
    graph._require(from_id)
    adjacency = graph._adjacency(direction)
    distances = {from_id: 0}
    queue = deque([from_id])
    while queue:
        node = queue.popleft()
        for neighbour in adjacency.get(node, ()):
            if neighbour not in distances:
                distances[neighbour] = distances[node] + 1
                queue.append(neighbour)
    return distances


def descendant_subgraph(
    graph: GenealogyGraph, root: str, max_depth: int | None = None
) -> GenealogyGraph:
    """Induced subgraph on all nodes within `max_depth` student edges of root.

    `max_depth` None means no depth limit.  The result contains every
    edge of the original graph between the retained nodes, so it is a
    valid genealogy graph in its own right and can be emitted as a
    node/edge CSV pair for plotting.
    """
    if max_depth is not None and max_depth < 1:
        raise ValueError("max_depth must be >= 1 or None")
    graph._require(root)
    kept = {root}
    queue = deque([(root, 0)])
    while queue:
        node, depth = queue.popleft()
        if max_depth is not None and depth >= max_depth:
            continue
        for student in graph.students_of(node):
            if student not in kept:
                kept.add(student)
                queue.append((student, depth + 1))

    scholars = [graph.scholar(node) for node in sorted(kept)]
    edges = [e for e in graph.edges() if e.professor_id in kept and e.student_id in kept]
    return build_graph(scholars, edges)
