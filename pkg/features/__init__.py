"""Sparse random feature expansions."""
