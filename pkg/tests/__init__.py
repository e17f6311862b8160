"""Desk-scale acceptance runs over the shipped manifests."""
