"""Factorial benchmark, blind pairwise judging, and scoring."""
