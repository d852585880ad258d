"""Test functions for the swarm optimizer. All have global minimum 0 at the origin."""
import numpy as np


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(x ** 2))


def ackley(x, a: float = 20.0, b: float = 0.2, c: float = 2.0 * np.pi) -> float:
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    term1 = -a * np.exp(-b * np.sqrt(np.sum(x ** 2) / d))
    term2 = -np.exp(np.sum(np.cos(c * x)) / d)
    return float(term1 + term2 + a + np.e)


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.shape[0] + np.sum(x ** 2 - 10.0 * np.cos(2.0 * np.pi * x)))


BENCHMARKS = {
    "sphere": sphere,
    "ackley": ackley,
    "rastrigin": rastrigin,
}
