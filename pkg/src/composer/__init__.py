"""Game algebra, series-parallel networks and constrained routing games."""
