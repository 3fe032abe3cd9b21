"""HTTP service wrapping the computation package."""

from .app import app, create_app

__all__ = ["app", "create_app"]
