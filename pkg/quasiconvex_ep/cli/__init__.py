"""
Command-line front end: run, bench, verify and plot.
"""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
