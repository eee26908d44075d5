"""Exact arithmetic library and verifier for the DJKM algebra."""

__version__ = "0.1.0"
