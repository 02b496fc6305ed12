"""Desk-scale experiments on smooth numbers in short intervals."""

__version__ = "0.1.0"
