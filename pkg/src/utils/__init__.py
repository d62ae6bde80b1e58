"""Leaf helpers used across the workbench."""
