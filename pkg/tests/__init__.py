"""Tests for the PCF Learned Sort experiments, CLI and Dagster assets."""
