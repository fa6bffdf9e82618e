"""
The FRT quantum supergroup: relations, rewriting and localization.
"""
