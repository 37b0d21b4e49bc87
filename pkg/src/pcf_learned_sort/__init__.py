"""PCF Learned Sort experiments: CLI, experiment runners and Dagster orchestration."""
