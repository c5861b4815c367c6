"""Workbench for the call-by-name lambda-mu calculus with coinductive types."""
__version__ = "0.1.0"
