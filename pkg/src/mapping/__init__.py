"""Region legends for demand sweeps."""
