"""Experiment runner and report serialization."""
