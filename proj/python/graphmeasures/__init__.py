"""Graph measures, kernel k-means clustering, and LFR benchmark graphs."""

from ._core import (
    Graph,
    GraphMeasureError,
    ari,
    build_measure,
    cluster,
    derived_matrices,
    evaluate_measure,
    generate_lfr,
    is_connected,
    load_graph,
    measure_names,
    modularity,
    sample_lfr_config,
    save_graph,
)

__all__ = [
    "Graph",
    "GraphMeasureError",
    "ari",
    "build_measure",
    "cluster",
    "derived_matrices",
    "evaluate_measure",
    "generate_lfr",
    "is_connected",
    "load_graph",
    "measure_names",
    "modularity",
    "sample_lfr_config",
    "save_graph",
]
