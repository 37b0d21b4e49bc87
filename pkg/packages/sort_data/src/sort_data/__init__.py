"""Key generation and key file loading for the sorting experiments."""
