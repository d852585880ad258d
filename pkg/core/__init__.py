"""Shared domain types, splits and the relative error metric."""
