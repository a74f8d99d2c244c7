"""Yearly candidate panel: outcome, covariates, dummy-group keys.

For every panel year the register is cut down to the shortlist of
plausible contenders: alive that year, strictly over 40, and not yet
awarded.  Each shortlisted scholar contributes one row with a 0/1
outcome (1 exactly in their award year), the female dummy, the nine
relative proximity measures computed within that year's shortlist, and
the categorical keys the dummy sets are expanded from.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import InvalidFilterError
from .genealogy import Gender, GenealogyGraph, Scholar, Source
from .proximity import (
    MEASURES,
    NobelSet,
    ProximityCache,
    ProximityVector,
    relative_scale,
    year_proximities,
)

FIRST_PANEL_YEAR = 1970
LAST_PANEL_YEAR = 2021


@dataclass(frozen=True)
class PanelRow:
    """One candidate-year observation."""

    scholar: str
    year: int
    won: int
    female: int
    prox: ProximityVector
    year_key: str
    alma_key: str
    field_key: str
    source: Source


def nobel_set_at(scholars: Iterable[Scholar], year: int) -> NobelSet:
    """The winners of all award years strictly before `year`."""
    members = frozenset(
        s.id for s in scholars if s.win_year is not None and s.win_year < year
    )
    return NobelSet(year=year, members=members)


def shortlist(scholars: Iterable[Scholar], year: int) -> set[str]:
    """Ids of scholars alive at `year`, strictly over 40, not yet awarded.

    Age is birth-year arithmetic; a candidate born exactly 40 years
    before `year` is excluded.  Scholars remain listed in the year they
    die and in the year they win.
    """
    chosen = set()
    for s in scholars:
        if not s.alive_at(year):
            continue
        if year - s.birth_year <= 40:
            continue
        if s.win_year is not None and s.win_year < year:
            continue
        chosen.add(s.id)
    return chosen


def build_panel(
    graph: GenealogyGraph,
    years: Sequence[int] | None = None,
    exponent: float = -1.0,
    max_peer_degree: int = 2,
    recent_window: int = 10,
) -> list[PanelRow]:
    """Assemble the candidate-year panel over the given years.

    Rows are ordered by (year, scholar id).  Years whose shortlist is
    empty, or that have no previous winners to measure proximity to,
    produce no rows.
    """
    if years is None:
        years = range(FIRST_PANEL_YEAR, LAST_PANEL_YEAR + 1)
    register = graph.scholars
    cache = ProximityCache(graph, max_peer_degree)
    rows: list[PanelRow] = []
    for year in years:
        targets = nobel_set_at(register.values(), year)
        if targets.count == 0:
            continue
        candidates = shortlist(register.values(), year)
        vectors = year_proximities(
            graph,
            candidates,
            targets,
            exponent=exponent,
            max_peer_degree=max_peer_degree,
            recent_window=recent_window,
            cache=cache,
        )
        for scholar_id in sorted(candidates):
            scholar = register[scholar_id]
            rows.append(
                PanelRow(
                    scholar=scholar_id,
                    year=year,
                    won=int(scholar.win_year == year),
                    female=int(scholar.gender is Gender.FEMALE),
                    prox=vectors[scholar_id],
                    year_key=str(year),
                    alma_key=scholar.alma_mater,
                    field_key=scholar.field,
                    source=scholar.source,
                )
            )
    return rows


def apply_candidate_filter(
    panel: Sequence[PanelRow],
    excluded_sources: Iterable[Source | str],
    rescale_after_filter: bool = False,
) -> list[PanelRow]:
    """Drop rows whose scholar entered the register via an excluded source.

    Laureates can never be filtered out.  By default the relative
    proximities keep the scaling of the full shortlist, so the filter
    changes the sample but not the regressors; with
    `rescale_after_filter` they are renormalised within the surviving
    rows of each year.
    """
    excluded = {Source(s) for s in excluded_sources}
    if Source.LAUREATE in excluded:
        raise InvalidFilterError("the laureate source cannot be excluded")
    kept = [row for row in panel if row.source not in excluded]
    if not rescale_after_filter:
        return kept
    return _rescale_rows(kept)


def _rescale_rows(rows: list[PanelRow]) -> list[PanelRow]:
    """Recompute each year's relative values from the surviving raw scores."""
    by_year: dict[int, list[PanelRow]] = {}
    for row in rows:
        by_year.setdefault(row.year, []).append(row)
    result = []
    for year in sorted(by_year):
        year_rows = by_year[year]
        rescaled: dict[str, dict[str, float]] = {}
        for measure in MEASURES:
            raw = {
                row.scholar: getattr(row.prox, f"{measure}_raw")
                for row in year_rows
            }
            rescaled[measure] = relative_scale(raw)
        for row in year_rows:
            updates = {
                f"{measure}_rel": rescaled[measure][row.scholar]
                for measure in MEASURES
            }
            result.append(replace(row, prox=replace(row.prox, **updates)))
    return result
