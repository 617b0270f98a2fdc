"""Coverage-criterion failure analysis for coordinate-free sensor networks."""
