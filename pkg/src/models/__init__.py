"""Domain types and run configuration."""
