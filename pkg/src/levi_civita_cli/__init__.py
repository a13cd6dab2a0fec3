"""Levi-Civita workbench - exact symbolic tooling for generalized Levi-Civita functional equations."""

__version__ = "0.1.0"
