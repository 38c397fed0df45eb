"""
seqrecourse: sequential algorithmic recourse.

explore finds a counterfactual, exploit builds a local density-weighted
graph around the route, enhance extracts the cheapest path as a sequence
of steps. A privacy ledger records which training rows each stage read.
"""

__version__ = '1.0.0'
