"""Core utilities: config, dataset registry, logging, retries and artifact storage."""
