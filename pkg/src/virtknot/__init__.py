"""Virtual knot calculus on signed Gauss codes, plus a finite-site laboratory."""

from __future__ import annotations

__version__ = "1.0.0"
FORMAT_VERSION = 1

__all__ = ["__version__", "FORMAT_VERSION"]
