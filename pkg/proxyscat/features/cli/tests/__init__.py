"""Tests for the command-line drivers."""
