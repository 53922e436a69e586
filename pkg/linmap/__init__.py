"""
linmap - Functional graphs of linear maps over finite fields

Exact counts of the non-isomorphic functional graphs of F_q-linear maps
(all maps and invertible maps), the bounds that sandwich them, the number
theory behind those bounds, and a brute-force oracle that checks it all at
small scale.
"""

__version__ = "1.0.0"

from .census import count_A, count_B
from .cyclegraph import CycleMultiset, factor_product, tensor
from .errors import LinmapError

__all__ = [
    "CycleMultiset",
    "LinmapError",
    "count_A",
    "count_B",
    "factor_product",
    "tensor",
]
