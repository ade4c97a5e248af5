"""Weighted digraph analytics for banking and transaction networks."""

import json

from ._banknet import (
    BanknetError,
    Graph,
    analyze_snapshot,
    aml_scan_json,
    con_pair,
    con_scores,
    con_set,
    load_snapshot_series,
    louvain,
    modularity,
    pagerank_reversed,
    parse_bis_csv,
    shortest_paths,
    simple_cycles,
    unity_normalize,
)


def aml_scan(csv_text, **options):
    """Run the transaction scan and return the report as a dict."""
    return json.loads(aml_scan_json(csv_text, **options))


__all__ = [
    "BanknetError",
    "Graph",
    "aml_scan",
    "aml_scan_json",
    "analyze_snapshot",
    "con_pair",
    "con_scores",
    "con_set",
    "load_snapshot_series",
    "louvain",
    "modularity",
    "pagerank_reversed",
    "parse_bis_csv",
    "shortest_paths",
    "simple_cycles",
    "unity_normalize",
]
