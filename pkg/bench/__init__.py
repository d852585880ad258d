"""Synthetic uncertainty-quantification benchmarks."""
