"""CSV ingestion and emission.

Three input files feed the pipeline, all UTF-8 with a mandatory header:

* scholars.csv: id,name,birth_year,death_year,win_year,gender,alma_mater,jel,source
* edges.csv:    professor_id,student_id
* citations.csv: scholar_id,year,count

An empty field means missing.  Parsing failures raise ParseError with
file and line; invariant failures raise ValidationError naming the row.
The same schemas are used for emission, so a written file re-ingests to
identical objects, and subgraph exports are valid inputs elsewhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import ParseError, SchemaError, ValidationError
from .genealogy import (
    Gender,
    GenealogyGraph,
    MentorEdge,
    Scholar,
    Source,
    build_graph,
)
from .panel import PanelRow
from .proximity import ProximityVector

SCHOLARS_COLUMNS = (
    "id",
    "name",
    "birth_year",
    "death_year",
    "win_year",
    "gender",
    "alma_mater",
    "jel",
    "source",
)
EDGES_COLUMNS = ("professor_id", "student_id")
CITATIONS_COLUMNS = ("scholar_id", "year", "count")
PANEL_COLUMNS = (
    "scholar_id",
    "year",
    "won",
    "female",
    *ProximityVector.column_names(),
    "alma_mater",
    "field",
    "source",
)


class RejectedRow(NamedTuple):
    path: str
    line: int
    reason: str


@dataclass
class LoadReport:
    """Row counts and rejection diagnostics from one ingestion run."""

    scholars: int = 0
    edges: int = 0
    citation_rows: int = 0
    rejected: list[RejectedRow] = field(default_factory=list)


@dataclass
class IngestResult:
    graph: GenealogyGraph
    citations: dict[str, tuple[tuple[int, int], ...]]
    report: LoadReport


def _read_rows(path: str, columns: Sequence[str]) -> Iterator[tuple[int, list[str]]]:
    try:
        handle = open(path, encoding="utf-8", newline="")
    except OSError as err:
        raise ParseError(path, 0, str(err)) from None
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header "
                              f"{','.join(columns)}") from None
        if header != list(columns):
            raise SchemaError(
                f"{path}: header {','.join(header)!r} does not match "
                f"expected {','.join(columns)!r}"
            )
        for line, row in enumerate(reader, start=2):
            if not row:
                continue  # ignore blank lines
            if len(row) != len(columns):
                raise ParseError(
                    path, line, f"expected {len(columns)} fields, got {len(row)}"
                )
            yield line, row


def _parse_int(value: str, path: str, line: int, name: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(path, line, f"{name}: not an integer: {value!r}") from None


def _parse_opt_int(value: str, path: str, line: int, name: str) -> int | None:
    if value == "":
        return None
    return _parse_int(value, path, line, name)


def _parse_enum(enum_cls, value: str, default, path: str, line: int, name: str):
    if value == "":
        return default
    try:
        return enum_cls(value)
    except ValueError:
        allowed = "/".join(member.value for member in enum_cls)
        raise ParseError(
            path, line, f"{name}: {value!r} is not one of {allowed}"
        ) from None


def load_scholars(path: str) -> list[Scholar]:
    """Parse and validate the scholar register."""
    scholars: list[Scholar] = []
    for line, row in _read_rows(path, SCHOLARS_COLUMNS):
        (sid, name, birth, death, win, gender, alma, jel, source) = row
        if birth == "":
            raise ValidationError(f"{path}:{line}: birth_year is required")
        scholar = Scholar(
            id=sid,
            name=name.strip(),
            birth_year=_parse_int(birth, path, line, "birth_year"),
            death_year=_parse_opt_int(death, path, line, "death_year"),
            win_year=_parse_opt_int(win, path, line, "win_year"),
            gender=_parse_enum(Gender, gender, Gender.UNKNOWN, path, line, "gender"),
            alma_mater=alma.strip(),
            field=jel.strip(),
            source=_parse_enum(Source, source, Source.AD_HOC, path, line, "source"),
        )
        try:
            scholar.validate()
            if scholar.win_year is not None and scholar.source is not Source.LAUREATE:
                # Source-based sample filters must never touch winner rows.
                raise ValidationError(
                    f"winner {scholar.id!r} must have source=laureate"
                )
        except ValidationError as err:
            raise ValidationError(f"{path}:{line}: {err}") from None
        scholars.append(scholar)
    return scholars


def load_edges(path: str) -> list[MentorEdge]:
    """Parse the professor -> student edge list."""
    edges: list[MentorEdge] = []
    for line, row in _read_rows(path, EDGES_COLUMNS):
        professor_id, student_id = row
        if professor_id.strip() == "" or student_id.strip() == "":
            raise ValidationError(f"{path}:{line}: edge endpoints are required")
        edge = MentorEdge(professor_id, student_id)
        try:
            edge.validate()
        except ValidationError as err:
            raise ValidationError(f"{path}:{line}: {err}") from None
        edges.append(edge)
    return edges


def load_citations(path: str) -> dict[str, tuple[tuple[int, int], ...]]:
    """Parse annual citation counts, one (scholar, year) row each.

    Returns per-scholar observation tuples sorted by year.
    """
    seen: dict[tuple[str, int], int] = {}
    collected: dict[str, list[tuple[int, int]]] = {}
    for line, row in _read_rows(path, CITATIONS_COLUMNS):
        scholar_id, year_text, count_text = row
        scholar_id = scholar_id.strip()
        if scholar_id == "":
            raise ValidationError(f"{path}:{line}: scholar_id is required")
        year = _parse_int(year_text, path, line, "year")
        count = _parse_int(count_text, path, line, "count")
        if count < 0:
            raise ValidationError(f"{path}:{line}: negative citation count")
        key = (scholar_id, year)
        if key in seen:
            raise ValidationError(
                f"{path}:{line}: duplicate citation row for {scholar_id!r} "
                f"year {year} (first at line {seen[key]})"
            )
        seen[key] = line
        collected.setdefault(scholar_id, []).append((year, count))
    return {
        scholar_id: tuple(sorted(observations))
        for scholar_id, observations in collected.items()
    }


def ingest(config) -> IngestResult:
    """Load, validate, and assemble all configured inputs.

    `config` is a RunConfig (or anything with the three path fields).
    An empty citations path means no citation data.
    """
    scholars = load_scholars(config.scholars_path)
    edges = load_edges(config.edges_path)
    graph = build_graph(scholars, edges)
    citations: dict[str, tuple[tuple[int, int], ...]] = {}
    citation_rows = 0
    if config.citations_path:
        citations = load_citations(config.citations_path)
        citation_rows = sum(len(obs) for obs in citations.values())
        unknown = sorted(set(citations) - set(graph.scholars))
        if unknown:
            raise ValidationError(
                f"{config.citations_path}: citation rows for scholars "
                f"not in the register: {', '.join(unknown)}"
            )
    report = LoadReport(
        scholars=len(scholars), edges=len(edges), citation_rows=citation_rows
    )
    return IngestResult(graph=graph, citations=citations, report=report)


# ---- emission ------------------------------------------------------------


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _year_text(year: int | None) -> str:
    return "" if year is None else str(year)


def emit_scholars(scholars: Iterable[Scholar], path: str) -> None:
    rows = [
        (
            s.id,
            s.name,
            str(s.birth_year),
            _year_text(s.death_year),
            _year_text(s.win_year),
            s.gender.value,
            s.alma_mater,
            s.field,
            s.source.value,
        )
        for s in scholars
    ]
    _write_csv(path, SCHOLARS_COLUMNS, rows)


def emit_edges(edges: Iterable[MentorEdge], path: str) -> None:
    _write_csv(
        path, EDGES_COLUMNS, [(e.professor_id, e.student_id) for e in edges]
    )


def emit_graph(graph: GenealogyGraph, scholars_path: str, edges_path: str) -> None:
    """Write a graph back out as a loadable scholars/edges CSV pair."""
    emit_scholars(
        (graph.scholars[sid] for sid in sorted(graph.scholars)), scholars_path
    )
    emit_edges(graph.edges(), edges_path)


def emit_panel(panel: Sequence[PanelRow], path: str) -> None:
    """Write the panel; floats use shortest round-trip representation."""
    rows = []
    for row in panel:
        record = [row.scholar, str(row.year), str(row.won), str(row.female)]
        record.extend(
            repr(getattr(row.prox, column))
            for column in ProximityVector.column_names()
        )
        record.extend([row.alma_key, row.field_key, row.source.value])
        rows.append(record)
    _write_csv(path, PANEL_COLUMNS, rows)


def load_panel(path: str) -> list[PanelRow]:
    """Read a panel CSV back into rows; inverse of emit_panel."""
    prox_columns = ProximityVector.column_names()
    panel: list[PanelRow] = []
    for line, row in _read_rows(path, PANEL_COLUMNS):
        scholar_id = row[0]
        year = _parse_int(row[1], path, line, "year")
        won = _parse_int(row[2], path, line, "won")
        female = _parse_int(row[3], path, line, "female")
        if won not in (0, 1) or female not in (0, 1):
            raise ValidationError(f"{path}:{line}: won and female must be 0 or 1")
        values = {}
        for offset, column in enumerate(prox_columns, start=4):
            try:
                values[column] = float(row[offset])
            except ValueError:
                raise ParseError(
                    path, line, f"{column}: not a number: {row[offset]!r}"
                ) from None
        alma, jel, source_text = row[4 + len(prox_columns):]
        source = _parse_enum(
            Source, source_text, Source.AD_HOC, path, line, "source"
        )
        panel.append(
            PanelRow(
                scholar=scholar_id,
                year=year,
                won=won,
                female=female,
                prox=ProximityVector(scholar=scholar_id, year=year, **values),
                year_key=str(year),
                alma_key=alma,
                field_key=jel,
                source=source,
            )
        )
    return panel
