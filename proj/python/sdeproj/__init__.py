"""Projection of Ito SDEs onto submanifolds, with Gaussian projection filters."""

from ._sdeproj import *  # noqa: F401,F403
from ._sdeproj import ProjectionKind, embeddings  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
