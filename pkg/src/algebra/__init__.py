"""
Coefficient rings, Lie superalgebra presentations and enveloping algebras.
"""
