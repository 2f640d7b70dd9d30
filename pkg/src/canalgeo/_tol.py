"""Shared tolerance and exception types."""

import os

#: Geometric tolerance for orientation, containment and facet merging.
TAU = float(os.environ.get("CANALGEO_TOL", "1e-9"))


class GeometryError(Exception):
    """Base class for all errors raised by canalgeo."""


class DegenerateInput(GeometryError):
    """Input has lower affine dimension than the operation requires."""


class ProjectionMismatch(GeometryError):
    """A witness body does not project onto the prescribed planar body."""


class PreconditionViolated(GeometryError):
    """An inequality check was called outside its hypotheses."""


class ScaleLimit(GeometryError):
    """A desk-scale operation would exceed its configured size cap."""
