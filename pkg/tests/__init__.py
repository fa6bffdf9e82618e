"""
Test package for twistlab.
"""
