"""Invariant gates."""
