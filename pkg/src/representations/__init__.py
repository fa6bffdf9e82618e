"""
Exact finite-dimensional representations and R-matrices.
"""
