"""Prometheus metrics for pdelaunay."""
