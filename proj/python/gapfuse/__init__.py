"""Gap-aware fusion of gridded rainfall rasters.

Rasters are 2D float arrays with NaN marking missing pixels. The headline
operation is :func:`fuse`, which merges two gap-ridden views of the same
rain field; the rest of the module covers synthetic data generation,
detection scoring, distribution comparison, and the grid file format.
"""

from gapfuse._core import (
    detection_scores,
    fuse,
    generate_pair,
    generate_truth,
    ks_test,
    observe,
    read_grid,
    write_grid,
)

__version__ = "0.1.0"

__all__ = [
    "detection_scores",
    "fuse",
    "generate_pair",
    "generate_truth",
    "ks_test",
    "observe",
    "read_grid",
    "write_grid",
]
