"""Experiment assets and jobs."""
