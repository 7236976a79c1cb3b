"""Cores, degeneracy and cut metrics for step graphons."""
