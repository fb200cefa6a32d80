"""Global base maps of science, document-set overlays, and diversity.

Pipeline: parse a category-citation matrix, build a base map (cosine
similarity, factor analysis, clustering, layout), project document sets
onto it, emit Pajek/VOSviewer/SVG outputs, and measure Rao-Stirling
diversity.  `OverlayMapper` wraps the pipeline in a scikit-learn style
fit/transform API.
"""

from .basemap import BaseMapConfig, build_base_map, load_base_map, save_base_map
from .clustering import clustering_objective, vos_clustering
from .diversity import overlay_diversity, rao_stirling
from .emit import (
    render_svg,
    write_citation_matrix,
    write_paj_project,
    write_pajek_clu,
    write_pajek_net,
    write_pajek_vec,
    write_vosviewer_map,
)
from .errors import (
    AllUnmatched,
    DimensionMismatch,
    DuplicateLabel,
    EmptyExport,
    MalformedRow,
    MissingLabel,
    NegativeCell,
    NotSquare,
    RegistryMismatch,
    SciomapError,
    UnknownLabel,
)
from .estimator import OverlayMapper
from .factors import FactorModel, factor_analysis, varimax
from .ingest import (
    build_overlay,
    parse_analyze_export,
    parse_citation_matrix,
    parse_partition_file,
    parse_registry_file,
)
from .layout import LayoutResult, vos_layout
from .model import (
    BaseMap,
    CategoryRegistry,
    CitationMatrix,
    DiversityInput,
    OverlayVector,
    Partition,
    SimilarityMatrix,
    lookup,
    normalize_label,
)
from .overlay import OverlayMap, project
from .shipped import cs_math_partition_rows, default_palette, default_registry
from .similarity import cosine_similarity
from .synthetic import block_citation_matrix, synthetic_citation_matrix

__version__ = "0.1.0"

__all__ = [
    "AllUnmatched",
    "BaseMap",
    "BaseMapConfig",
    "CategoryRegistry",
    "CitationMatrix",
    "DimensionMismatch",
    "DiversityInput",
    "DuplicateLabel",
    "EmptyExport",
    "FactorModel",
    "LayoutResult",
    "MalformedRow",
    "MissingLabel",
    "NegativeCell",
    "NotSquare",
    "OverlayMap",
    "OverlayMapper",
    "OverlayVector",
    "Partition",
    "RegistryMismatch",
    "SciomapError",
    "SimilarityMatrix",
    "UnknownLabel",
    "block_citation_matrix",
    "build_base_map",
    "build_overlay",
    "clustering_objective",
    "cosine_similarity",
    "cs_math_partition_rows",
    "default_palette",
    "default_registry",
    "factor_analysis",
    "load_base_map",
    "lookup",
    "normalize_label",
    "overlay_diversity",
    "parse_analyze_export",
    "parse_citation_matrix",
    "parse_partition_file",
    "parse_registry_file",
    "project",
    "rao_stirling",
    "render_svg",
    "save_base_map",
    "synthetic_citation_matrix",
    "varimax",
    "vos_clustering",
    "vos_layout",
    "write_citation_matrix",
    "write_paj_project",
    "write_pajek_clu",
    "write_pajek_net",
    "write_pajek_vec",
    "write_vosviewer_map",
]
