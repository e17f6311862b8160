"""Feature packages, one per library module."""
