"""pdelaunay test suite."""
