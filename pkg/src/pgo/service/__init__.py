"""Service layer: FastAPI app and its request/response schemas."""

from .app import app

__all__ = ["app"]
