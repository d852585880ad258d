"""Particle swarm optimization."""
