"""Command-line interface.

Subcommands cover the pipeline stages: ingest, closeness, panel, fit,
splits, sensitivity, citations, report, subgraph.  Every subcommand
takes --config pointing at a flat key = value file; targeted flags
override single settings.  Exit codes: 0 success, 1 invalid data or
configuration, 2 estimation failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .config import RunConfig, parse_config, with_overrides
from .errors import DataError, EmptyInputError, EstimationError
from .estimators import RELATION_KINDS, won_after
from .genealogy import descendant_subgraph
from .ingest import emit_graph, emit_panel, ingest
from .panel import apply_candidate_filter, build_panel, nobel_set_at, shortlist
from .proximity import ProximityVector, year_proximities
from .report import (
    BASE_COVARIATES,
    citation_break_rows,
    fit_panel_model,
    format_fit_text,
    render_table,
    run_report,
    sensitivity_grid,
    split_grid,
    summarize_breaks,
)


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = parse_config(args.config) if args.config else RunConfig()
    config.validate()
    return config


def _build_filtered_panel(config: RunConfig, graph):
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
    return panel


def cmd_ingest(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = ingest(config)
    report = result.report
    print(f"scholars: {report.scholars}")
    print(f"edges: {report.edges}")
    print(f"citation rows: {report.citation_rows}")
    print(f"graph: {result.graph.node_count} nodes, {result.graph.edge_count} edges")
    print(f"rejected rows: {len(report.rejected)}")
    for rejected in report.rejected:
        print(f"  {rejected.path}:{rejected.line}: {rejected.reason}")
    return 0


def cmd_closeness(args: argparse.Namespace) -> int:
    config = _load_config(args)
    graph = ingest(config).graph
    register = graph.scholars
    targets = nobel_set_at(register.values(), args.year)
    if targets.count == 0:
        raise EmptyInputError(f"no winners before {args.year}")
    candidates = shortlist(register.values(), args.year)
    vectors = year_proximities(
        graph,
        candidates,
        targets,
        exponent=config.exponent,
        max_peer_degree=config.max_peer_degree,
        recent_window=config.recent_window,
    )
    columns = ProximityVector.column_names()
    print(",".join(("scholar_id", "year") + columns))
    for scholar_id in sorted(vectors):
        vector = vectors[scholar_id]
        values = ",".join(repr(getattr(vector, column)) for column in columns)
        print(f"{scholar_id},{args.year},{values}")
    return 0


def cmd_panel(args: argparse.Namespace) -> int:
    config = _load_config(args)
    graph = ingest(config).graph
    panel = _build_filtered_panel(config, graph)
    emit_panel(panel, args.out)
    print(f"{len(panel)} rows -> {args.out}")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    config = _load_config(args)
    config = with_overrides(
        config,
        link=args.link,
        effects=tuple(args.effects.split(",")) if args.effects else None,
        excluded_sources=tuple(args.exclude_source) if args.exclude_source else None,
    )
    covariates = (
        tuple(args.covariates.split(",")) if args.covariates else BASE_COVARIATES
    )
    graph = ingest(config).graph
    panel = _build_filtered_panel(config, graph)
    fit = fit_panel_model(panel, covariates, config.effects, config.link)
    print(format_fit_text(fit), end="")
    return 0


def cmd_splits(args: argparse.Namespace) -> int:
    config = _load_config(args)
    graph = ingest(config).graph
    panel = _build_filtered_panel(config, graph)
    print(render_table("Probability of winning (winner splits)", split_grid(panel)),
          end="")
    return 0


def cmd_sensitivity(args: argparse.Namespace) -> int:
    config = _load_config(args)
    graph = ingest(config).graph
    panel = _build_filtered_panel(config, graph)
    table = sensitivity_grid(panel, config.rescale_after_filter)
    print(render_table("Probability of winning (candidate sources)", table), end="")
    return 0


def cmd_citations(args: argparse.Namespace) -> int:
    config = _load_config(args)
    loaded = ingest(config)
    for kind in RELATION_KINDS:
        pairs = won_after(loaded.graph, kind, config.max_peer_degree)
        rows = citation_break_rows(pairs, loaded.citations)
        counts = summarize_breaks(rows)
        print(
            f"{kind}: negative {counts['negative']}, "
            f"positive {counts['positive']}, "
            f"insignificant {counts['insignificant']} "
            f"({len(rows)} estimated of {len(pairs)} pairs)"
        )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = _load_config(args)
    bundle = run_report(config)
    for name in sorted(bundle.artifacts):
        print(bundle.artifacts[name])
    return 0


def cmd_subgraph(args: argparse.Namespace) -> int:
    config = _load_config(args)
    graph = ingest(config).graph
    subgraph = descendant_subgraph(graph, args.root, args.depth)
    nodes_path = f"{args.out_prefix}_nodes.csv"
    edges_path = f"{args.out_prefix}_edges.csv"
    emit_graph(subgraph, nodes_path, edges_path)
    print(
        f"{subgraph.node_count} nodes -> {nodes_path}\n"
        f"{subgraph.edge_count} edges -> {edges_path}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nobelnet",
        description="Genealogy-network analysis of prize candidacies.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def subcommand(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--config", help="path to key = value config file")
        sub.set_defaults(handler=handler)
        return sub

    subcommand("ingest", cmd_ingest, "load and validate the input files")

    closeness = subcommand(
        "closeness", cmd_closeness, "proximity measures for one year's shortlist"
    )
    closeness.add_argument("--year", type=int, required=True)

    panel = subcommand("panel", cmd_panel, "build and write the candidate panel")
    panel.add_argument("--out", default="panel.csv")

    fit = subcommand("fit", cmd_fit, "fit one model on the panel")
    fit.add_argument("--link", choices=("logit", "probit"))
    fit.add_argument("--effects", help="comma-separated: year,alma,field")
    fit.add_argument(
        "--exclude-source",
        action="append",
        help="candidate source to drop (repeatable)",
    )
    fit.add_argument("--covariates", help="comma-separated regressor names")

    subcommand("splits", cmd_splits, "winner-subset split regressions")
    subcommand("sensitivity", cmd_sensitivity, "candidate-source sensitivity fits")
    subcommand("citations", cmd_citations, "citation-break summary per relation kind")
    subcommand("report", cmd_report, "produce the full report bundle")

    subgraph = subcommand(
        "subgraph", cmd_subgraph, "export a descendant subgraph as CSVs"
    )
    subgraph.add_argument("--root", required=True)
    subgraph.add_argument("--depth", type=int)
    subgraph.add_argument("--out-prefix", default="subgraph")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except EstimationError as err:
        print(f"estimation error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
