"""Report bundle: regression tables, probability surface, relation lists.

run_report drives the whole pipeline: ingest, panel, the three
regression tables (baseline grid, winner-subset splits, candidate-source
sensitivity), the predicted-probability surface, won-after lists,
citation-break tables, and cumulative citations at award.  All artifacts
are plain text or CSV, carry no timestamps, and are written in one pass
at the end, so identical inputs give byte-identical outputs.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .config import RunConfig
from .errors import DegenerateDesignError
from .estimators import (
    CitationSeries,
    DesignMatrix,
    GlmFit,
    Link,
    RELATION_KINDS,
    WonAfterPair,
    build_design,
    citation_break,
    drop_separated_groups,
    fit_glm,
    predict_probability,
    won_after,
)
from .genealogy import GenealogyGraph
from .ingest import IngestResult, ingest
from .panel import PanelRow, apply_candidate_filter, build_panel

#: Two-sided standard-normal critical values for p < 0.05 / 0.01 / 0.001.
_STAR_CUTS = ((3.290526731, "***"), (2.575829304, "**"), (1.959963985, "*"))

BASE_COVARIATES = ("female", "prof_rel", "student_rel", "peer_rel")

#: Winner-subset split specifications: label and covariate list.
SPLIT_SPECS = (
    ("all winners", BASE_COVARIATES),
    (
        "living/deceased professors",
        ("female", "prof_living_rel", "prof_deceased_rel", "student_rel", "peer_rel"),
    ),
    (
        "recent/earlier professors",
        ("female", "prof_recent_rel", "prof_earlier_rel", "student_rel", "peer_rel"),
    ),
    (
        "recent/earlier professors and peers",
        (
            "female",
            "prof_recent_rel",
            "prof_earlier_rel",
            "student_rel",
            "peer_recent_rel",
            "peer_earlier_rel",
        ),
    ),
)

#: Candidate-source sensitivity: label and sources removed from the panel.
SENSITIVITY_SPECS = (
    ("all", ()),
    ("without ad_hoc", ("ad_hoc",)),
    ("without ad_hoc and ideas_repec", ("ad_hoc", "ideas_repec")),
)

COVARIATE_LABELS = {
    "female": "female",
    "prof_rel": "Nobel professors",
    "student_rel": "Nobel students",
    "peer_rel": "Nobel peers",
    "prof_living_rel": "living Nobel professors",
    "prof_deceased_rel": "deceased Nobel professors",
    "prof_recent_rel": "recent Nobel professors",
    "prof_earlier_rel": "earlier Nobel professors",
    "peer_recent_rel": "recent Nobel peers",
    "peer_earlier_rel": "earlier Nobel peers",
}

SURFACE_STEPS = 21


def significance_stars(t_stat: float) -> str:
    magnitude = abs(t_stat)
    for cut, mark in _STAR_CUTS:
        if magnitude > cut:
            return mark
    return ""


@dataclass
class FitColumn:
    """One fitted model column of a report table."""

    label: str
    effects: tuple[str, ...]
    fit: GlmFit


@dataclass
class ReportBundle:
    output_dir: str
    artifacts: dict[str, str]
    baseline: list[FitColumn]
    splits: list[FitColumn]
    sensitivity: list[FitColumn]
    won_after: dict[str, list[WonAfterPair]]
    citation_breaks: dict[str, list[dict]]


def fit_panel_model(
    panel: Sequence[PanelRow],
    covariates: Sequence[str],
    effects: Sequence[str],
    link: Link | str,
) -> GlmFit:
    """Design, separation handling when dummies are present, then fit."""
    design = build_design(panel, covariates=covariates, effects=effects)
    if effects:
        design = drop_separated_groups(design)
    return fit_glm(design, link)


def baseline_grid(panel: Sequence[PanelRow]) -> list[FitColumn]:
    """Eight fits: {none, year, year+alma, year+field} x {logit, probit}."""
    columns = []
    for effects in ((), ("year",), ("year", "alma"), ("year", "field")):
        for link in (Link.LOGIT, Link.PROBIT):
            label = "+".join(effects) if effects else "none"
            fit = fit_panel_model(panel, BASE_COVARIATES, effects, link)
            columns.append(FitColumn(label=label, effects=effects, fit=fit))
    return columns


def split_grid(panel: Sequence[PanelRow]) -> list[FitColumn]:
    """Winner-subset splits, all with year effects."""
    columns = []
    for label, covariates in SPLIT_SPECS:
        for link in (Link.LOGIT, Link.PROBIT):
            fit = fit_panel_model(panel, covariates, ("year",), link)
            columns.append(FitColumn(label=label, effects=("year",), fit=fit))
    return columns


def sensitivity_grid(
    panel: Sequence[PanelRow], rescale_after_filter: bool = False
) -> list[FitColumn]:
    """Candidate-source exclusions, all with year effects."""
    columns = []
    for label, excluded in SENSITIVITY_SPECS:
        subset = apply_candidate_filter(panel, excluded, rescale_after_filter)
        for link in (Link.LOGIT, Link.PROBIT):
            fit = fit_panel_model(subset, BASE_COVARIATES, ("year",), link)
            columns.append(FitColumn(label=label, effects=("year",), fit=fit))
    return columns


# ---- text rendering ------------------------------------------------------


def _coefficient_cell(fit: GlmFit, name: str) -> tuple[str, str]:
    if name not in fit.coefficients:
        return "", ""
    value = fit.coefficients[name]
    t_stat = fit.t_stats[name]
    return f"{value:.4g}{significance_stars(t_stat)}", f"({t_stat:.2f})"


def render_table(title: str, columns: Sequence[FitColumn]) -> str:
    """Paper-style text table: one column per fit, t in parentheses."""
    names: list[str] = []
    for column in columns:
        for name in column.fit.coefficients:
            if name != "intercept" and ":" not in name and name not in names:
                names.append(name)

    width = 14
    label_width = 28
    lines = [title, ""]
    header = "".ljust(label_width)
    subheader = "".ljust(label_width)
    for index, column in enumerate(columns, start=1):
        header += f"({index})".rjust(width)
        subheader += column.fit.link.value.rjust(width)
    lines.extend([header, subheader, "-" * (label_width + width * len(columns))])

    for name in names:
        label = COVARIATE_LABELS.get(name, name)
        coef_line = label.ljust(label_width)
        t_line = "".ljust(label_width)
        for column in columns:
            coef, t_text = _coefficient_cell(column.fit, name)
            coef_line += coef.rjust(width)
            t_line += t_text.rjust(width)
        lines.extend([coef_line, t_line])

    lines.append("-" * (label_width + width * len(columns)))
    for effect, label in (
        ("year", "Year effects"),
        ("alma", "Alma mater effects"),
        ("field", "Field effects"),
    ):
        row = label.ljust(label_width)
        for column in columns:
            row += ("yes" if effect in column.effects else "no").rjust(width)
        lines.append(row)
    obs_row = "Observations".ljust(label_width)
    ll_row = "Log-likelihood".ljust(label_width)
    for column in columns:
        obs_row += str(column.fit.n_used).rjust(width)
        ll_row += f"{column.fit.log_likelihood:.2f}".rjust(width)
    lines.extend([obs_row, ll_row])

    specs = "Specification: " + "; ".join(
        f"({index}) {column.label}" for index, column in enumerate(columns, start=1)
    )
    lines.extend(
        [
            "",
            "t statistics in parentheses",
            "* p<0.05, ** p<0.01, *** p<0.001",
            specs,
        ]
    )
    if any(not column.fit.converged for column in columns):
        flagged = [
            str(index)
            for index, column in enumerate(columns, start=1)
            if not column.fit.converged
        ]
        lines.append("NOT CONVERGED: columns " + ", ".join(flagged))
    return "\n".join(lines) + "\n"


def format_fit_text(fit: GlmFit) -> str:
    """One-fit summary block for the command line."""
    lines = [
        f"link: {fit.link.value}   n: {fit.n_used}   "
        f"log-likelihood: {fit.log_likelihood:.4f}   "
        f"converged: {'yes' if fit.converged else 'NO'}   "
        f"iterations: {fit.iterations}",
    ]
    if fit.dropped:
        lines.append(f"dropped categories: {len(fit.dropped)}")
        for group, reason in fit.dropped:
            lines.append(f"  {group}: {reason}")
    lines.append(f"{'column':<24}{'coef':>12}{'se':>12}{'t':>10}")
    for name in fit.coefficients:
        coef = fit.coefficients[name]
        se = fit.standard_errors[name]
        t_stat = fit.t_stats[name]
        lines.append(
            f"{name:<24}{coef:>12.5g}{se:>12.5g}{t_stat:>10.2f} "
            f"{significance_stars(t_stat)}"
        )
    return "\n".join(lines) + "\n"


def _fit_record(column: FitColumn) -> dict:
    fit = column.fit
    return {
        "label": column.label,
        "effects": list(column.effects),
        "link": fit.link.value,
        "coefficients": fit.coefficients,
        "standard_errors": fit.standard_errors,
        "t_stats": fit.t_stats,
        "log_likelihood": fit.log_likelihood,
        "n_used": fit.n_used,
        "dropped": [list(item) for item in fit.dropped],
        "converged": fit.converged,
        "iterations": fit.iterations,
    }


def _fits_json(columns: Sequence[FitColumn]) -> str:
    return json.dumps(
        [_fit_record(column) for column in columns], indent=2, sort_keys=True
    ) + "\n"


# ---- CSV bodies ----------------------------------------------------------


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def surface_rows(fit: GlmFit, steps: int = SURFACE_STEPS) -> list[tuple[str, str, str]]:
    rows = []
    for i in range(steps):
        student = i / (steps - 1)
        for j in range(steps):
            peer = j / (steps - 1)
            probability = predict_probability(
                fit, {"student_rel": student, "peer_rel": peer}
            )
            rows.append((repr(student), repr(peer), repr(probability)))
    return rows


def classify_break(break_t: float) -> str:
    if break_t > 1.959963985:
        return "positive"
    if break_t < -1.959963985:
        return "negative"
    return "insignificant"


def citation_break_rows(
    pairs: Sequence[WonAfterPair],
    citations: Mapping[str, tuple[tuple[int, int], ...]],
) -> list[dict]:
    """Per-pair break regressions for the later winner's citation series.

    Pairs without citation data, or with too few observations on either
    side of the break, are skipped.
    """
    rows = []
    for pair in pairs:
        observations = citations.get(pair.later_winner)
        if not observations or len(observations) < 4:
            continue
        years = [year for year, _ in observations]
        boundary = pair.earlier_year
        pre = sum(1 for year in years if year <= boundary)
        post = len(years) - pre
        if pre == 0 or post == 0:
            continue
        series = CitationSeries(
            scholar=pair.later_winner,
            observations=observations,
            relative_award_year=boundary,
        )
        result = citation_break(series)
        rows.append(
            {
                "scholar": pair.later_winner,
                "relative": pair.earlier_winner,
                "relative_award_year": boundary,
                "trend": result.trend,
                "break_coef": result.break_coef,
                "break_t": result.break_t,
                "classification": classify_break(result.break_t),
            }
        )
    return rows


def summarize_breaks(rows: Sequence[dict]) -> dict[str, int]:
    summary = {"negative": 0, "positive": 0, "insignificant": 0}
    for row in rows:
        summary[row["classification"]] += 1
    return summary


def cumulative_citation_rows(
    graph: GenealogyGraph,
    citations: Mapping[str, tuple[tuple[int, int], ...]],
) -> list[tuple[str, str, str]]:
    """Citations accumulated through the award year, per laureate."""
    rows = []
    laureates = [
        s for s in graph.scholars.values()
        if s.win_year is not None and s.id in citations
    ]
    laureates.sort(key=lambda s: (s.win_year, s.id))
    for scholar in laureates:
        total = sum(
            count for year, count in citations[scholar.id] if year <= scholar.win_year
        )
        rows.append((scholar.id, str(scholar.win_year), str(total)))
    return rows


# ---- orchestration -------------------------------------------------------


def run_report(config: RunConfig, loaded: IngestResult | None = None) -> ReportBundle:
    """Produce every artifact of the analysis into config.output_dir."""
    if loaded is None:
        loaded = ingest(config)
    graph = loaded.graph
    panel = build_panel(
        graph,
        years=config.years,
        exponent=config.exponent,
        max_peer_degree=config.max_peer_degree,
        recent_window=config.recent_window,
    )
    if config.excluded_sources:
        panel = apply_candidate_filter(
            panel, config.excluded_sources, config.rescale_after_filter
        )

    baseline = baseline_grid(panel)
    splits = split_grid(panel)
    sensitivity = sensitivity_grid(panel, config.rescale_after_filter)
    year_logit = baseline[2].fit  # logit with year effects drives the surface

    lists = {kind: won_after(graph, kind, config.max_peer_degree)
             for kind in RELATION_KINDS}
    breaks = {
        kind: citation_break_rows(lists[kind], loaded.citations)
        for kind in RELATION_KINDS
    }

    artifacts: dict[str, str] = {}
    outputs: list[tuple[str, str]] = []

    def stage(name: str, text: str) -> None:
        artifacts[name] = os.path.join(config.output_dir, name)
        outputs.append((artifacts[name], text))

    stage("table1.txt", render_table("Probability of winning (baseline)", baseline))
    stage("table1_fits.json", _fits_json(baseline))
    stage("table2.txt", render_table("Probability of winning (winner splits)", splits))
    stage("table2_fits.json", _fits_json(splits))
    stage(
        "table3.txt",
        render_table("Probability of winning (candidate sources)", sensitivity),
    )
    stage("table3_fits.json", _fits_json(sensitivity))
    stage(
        "figure1_surface.csv",
        _csv_text(
            ("student_rel", "peer_rel", "probability"), surface_rows(year_logit)
        ),
    )
    for kind in RELATION_KINDS:
        stage(
            f"won_after_{kind}.csv",
            _csv_text(
                ("later_winner", "earlier_winner", "later_year", "earlier_year"),
                [
                    (p.later_winner, p.earlier_winner, str(p.later_year),
                     str(p.earlier_year))
                    for p in lists[kind]
                ],
            ),
        )
        stage(
            f"citation_breaks_{kind}.csv",
            _csv_text(
                (
                    "scholar",
                    "relative",
                    "relative_award_year",
                    "trend",
                    "break_coef",
                    "break_t",
                    "classification",
                ),
                [
                    (
                        row["scholar"],
                        row["relative"],
                        str(row["relative_award_year"]),
                        repr(row["trend"]),
                        repr(row["break_coef"]),
                        repr(row["break_t"]),
                        row["classification"],
                    )
                    for row in breaks[kind]
                ],
            ),
        )
    stage(
        "cumulative_citations.csv",
        _csv_text(
            ("scholar_id", "win_year", "cumulative_citations"),
            cumulative_citation_rows(graph, loaded.citations),
        ),
    )

    os.makedirs(config.output_dir, exist_ok=True)
    for path, text in outputs:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)

    return ReportBundle(
        output_dir=config.output_dir,
        artifacts=artifacts,
        baseline=baseline,
        splits=splits,
        sensitivity=sensitivity,
        won_after=lists,
        citation_breaks=breaks,
    )
