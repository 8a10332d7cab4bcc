"""pdelaunay - exact certificates for perfect Delaunay polytopes."""

__version__ = "0.1.0"
