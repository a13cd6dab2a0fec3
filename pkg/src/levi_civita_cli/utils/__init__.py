"""Utility modules for parsing, serialization and report output."""
