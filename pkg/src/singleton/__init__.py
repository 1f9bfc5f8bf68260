"""
Exact machinery for singleton congestion games.
"""
