"""Data contracts for the PCF Learned Sort experiments."""
