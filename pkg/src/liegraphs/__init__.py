"""Exact-arithmetic workbench for graph operads, polydifferential
operads, graph complexes and Gutt star products."""

__version__ = "0.1.0"
