"""Desk-scale laboratory for monotone minimal perfect hashing lower bounds.

Exact, certificate-carrying implementations of the constructions behind
the space lower bound for monotone minimal perfect hashing: conflict /
shift / product graphs, rational fractional-coloring LPs with primal and
dual certificates, the hard input distribution with its window trees and
pruning, and concrete rank-index schemes with bit-exact size accounting.
"""

__version__ = "0.1.0"

from . import caps, coloring, graphs, harddist, mmphf, rng, tower, windowtree  # noqa: F401
from .caps import DEFAULT_CAPS, EnumerationCaps  # noqa: F401
from .errors import (  # noqa: F401
    CorruptIndexError,
    EnumerationCapExceeded,
    InvalidVertexError,
    MmphfLabError,
    SchemeViolationError,
)
