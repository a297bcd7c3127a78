"""Issue link map toolkit: graph queries, link recommendations, consistency checks."""

__version__ = "0.1.0"
