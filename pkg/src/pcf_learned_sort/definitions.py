"""Dagster definitions for the PCF Learned Sort experiments."""

from pathlib import Path

from dagster import Definitions, definitions, load_from_defs_folder


@definitions
def defs() -> Definitions:
    """Load the experiment assets and jobs from the defs folder."""
    return load_from_defs_folder(path_within_project=Path(__file__).parent)
