"""Gaussian embeddings for large attributed graphs.

Thin Python layer over the C++ core: graph loading and splitting, model
training with first/second-order proximity objectives, and the link
prediction / node classification / inductive evaluation protocols.
"""

from glace._core import (  # noqa: F401
    AttributedGraph,
    CitationConfig,
    Edge,
    EdgeSplit,
    GlaceNumericalError,
    GlaceParseError,
    GlaceValidationError,
    InductiveSplit,
    ModelKind,
    ModelParams,
    ProximityMode,
    SyntheticDataset,
    TrainConfig,
    TrainReport,
    __version__,
    citation_preset,
    dissimilarity,
    embeddings,
    evaluate_link_prediction,
    export_embeddings,
    hide_nodes,
    inductive_link_prediction,
    kl,
    link_prediction,
    load_checkpoint,
    load_graph,
    load_labels,
    make_citation_graph,
    make_sbm,
    node_classification,
    read_split_manifest,
    save_checkpoint,
    score_pair,
    split_edges,
    train,
    write_dataset,
    write_split_manifest,
)
