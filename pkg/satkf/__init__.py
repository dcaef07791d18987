"""Satellite tracking with centralized and information-form Kalman filters."""

__version__ = "0.1.0"
