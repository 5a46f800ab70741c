"""Weighted protein structure networks and graphlet edge-orbit measures."""

__version__ = "0.1.0"

from .atlas import GraphletAtlas, get_atlas
from .errors import WgdvError
from .logreg import CVReport, LabeledDataset, cross_validate, fit_logreg, stratified_folds
from .measures import (
    MatrixMeasure,
    VectorMeasure,
    WeightPool,
    compute_measure,
    cramer_von_mises,
    cramer_von_mises_hist,
    egdvm_matrix,
    graphlet_vector,
    ordered_vector,
    upper_correlations,
    wegdvm_matrix,
)
from .pdb_ingest import ResidueChain, parse_pdb
from .pipeline import ExtractConfig, FeatureStore, evaluate, export_dnn, extract
from .psn import WeightedPSN, build_psn, psn_from_edges, space_distance

__all__ = [
    "GraphletAtlas",
    "get_atlas",
    "WgdvError",
    "CVReport",
    "LabeledDataset",
    "cross_validate",
    "fit_logreg",
    "stratified_folds",
    "MatrixMeasure",
    "VectorMeasure",
    "WeightPool",
    "compute_measure",
    "cramer_von_mises",
    "cramer_von_mises_hist",
    "egdvm_matrix",
    "graphlet_vector",
    "ordered_vector",
    "upper_correlations",
    "wegdvm_matrix",
    "ResidueChain",
    "parse_pdb",
    "ExtractConfig",
    "FeatureStore",
    "evaluate",
    "export_dnn",
    "extract",
    "WeightedPSN",
    "build_psn",
    "psn_from_edges",
    "space_distance",
]
