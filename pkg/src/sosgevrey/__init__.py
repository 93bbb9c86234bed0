"""Normal forms and Gevrey thresholds for sums of squares of three fields.

Exact rational computer algebra: polynomial fields, their iterated brackets,
the reduction to standard form with Hörmander numbers (p, q), the type index
r, basis rewriting, and a search over the exponent bookkeeping of the
Gevrey estimate.
"""
from __future__ import annotations

__version__ = "0.1.0"
