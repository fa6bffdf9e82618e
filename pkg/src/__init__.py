"""
Twistlab package: exact verification of twisted Hopf superalgebras.
"""
