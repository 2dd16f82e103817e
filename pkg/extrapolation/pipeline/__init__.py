"""Report and model IO, run-config validation and per-method metrics."""
