"""Exact computations around Eisenstein ideals and cuspidal subgroups of J_0(N).

Everything is computed over Z or Q with Python integers and fractions; p-local
statements are obtained by taking p-adic valuations of global indices.
"""

__version__ = "0.1.0"
