"""Property verifiers and demand sweeps."""
