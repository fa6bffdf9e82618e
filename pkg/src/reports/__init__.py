"""
Verification reports.
"""
