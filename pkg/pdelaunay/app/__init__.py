"""pdelaunay command-line application."""
