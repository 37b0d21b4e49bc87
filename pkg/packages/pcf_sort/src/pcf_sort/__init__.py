"""PCF Learned Sort: model-based bucketing with a piecewise constant CDF model."""
