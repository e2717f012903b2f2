"""HTTP service wrapping the estimation library."""

from .app import app

__all__ = ["app"]
