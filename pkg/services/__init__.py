"""Services orchestrating the surrogate search."""
