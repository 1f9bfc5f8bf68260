"""
Readers and writers for game, CRG, report and sweep artifacts.
"""
