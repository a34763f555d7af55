"""Errors, schemas, configuration and logging."""
