"""Orbit model, noise, filters, statistics and the Monte Carlo harness."""
