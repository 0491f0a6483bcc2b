"""regexpassport: cross-dialect regex portability toolkit.

Lints patterns for cross-dialect false friends, detects and dynamically
validates super-linear matching behavior across modeled engine families, and
differentially tests pattern behavior across engines.
"""

from .dialects import Dialect
from .parser import parse
from .emitter import emit
from .syntax import Ast, ParseError, feature_inventory
from .variants import anchor_variant, unbounded_variant

__all__ = [
    "Ast",
    "Dialect",
    "ParseError",
    "anchor_variant",
    "emit",
    "feature_inventory",
    "parse",
    "unbounded_variant",
]

__version__ = "0.1.0"
