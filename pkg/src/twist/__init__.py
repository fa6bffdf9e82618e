"""
The two-parametric twist and the Hopf structure it induces.
"""
