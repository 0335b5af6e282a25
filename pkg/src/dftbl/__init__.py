"""Bandit convex optimization with delayed feedback: D-FTBL, baselines and a regret harness."""

__version__ = "0.1.0"
