"""Neural extrapolation of functions from a known basis: numerics, training and experiments."""
