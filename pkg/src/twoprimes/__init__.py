"""Computational companion to the two-primes-and-powers-of-two inequality."""

__version__ = "0.1.0"
SCHEMA_VERSION = 1
