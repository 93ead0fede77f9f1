"""Separation and smoothness indices for datasets and layer-wise dataflow."""

__version__ = "0.1.0"

from .datapipe import Series, WhitenStats, lag_embed, subset_sample, whiten
from .errors import DataflowError, ParameterError, ParseError, ValidationError
from .indices import (
    DEFAULT_BETA,
    QuantizationSpec,
    SmoothnessTerms,
    monotonicity_violations,
    quantize_targets,
    separation_count,
    separation_index,
    separation_index_r,
    separation_profile,
    si_smi_bridge,
    smoothness_index,
    smoothness_index_r,
    smoothness_profile,
    smoothness_terms,
)
from .io import LayerStack, load_labels, load_layer_stack, load_matrix, read_tensor, write_tensor
from .neighbors import NeighborTable, knn, pairwise_sq_distances

__all__ = [
    "DEFAULT_BETA",
    "DataflowError",
    "LayerStack",
    "NeighborTable",
    "ParameterError",
    "ParseError",
    "QuantizationSpec",
    "Series",
    "SmoothnessTerms",
    "ValidationError",
    "WhitenStats",
    "knn",
    "lag_embed",
    "load_labels",
    "load_layer_stack",
    "load_matrix",
    "monotonicity_violations",
    "pairwise_sq_distances",
    "quantize_targets",
    "read_tensor",
    "separation_count",
    "separation_index",
    "separation_index_r",
    "separation_profile",
    "si_smi_bridge",
    "smoothness_index",
    "smoothness_index_r",
    "smoothness_profile",
    "smoothness_terms",
    "subset_sample",
    "whiten",
    "write_tensor",
]
