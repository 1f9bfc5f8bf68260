"""
Core domain types for wardrop-kit: cost functions, games, flows and loads.
"""
