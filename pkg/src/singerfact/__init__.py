"""Reflection factorizations of Singer cycles in GL_n(F_q): counts, formulas, experiments."""

__version__ = "0.1.0"
