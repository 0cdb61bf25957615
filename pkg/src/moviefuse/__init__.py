"""Hybrid movie recommender fusing content similarity, collaborative
co-interest weighting and tweet sentiment similarity."""

__version__ = "0.1.0"
