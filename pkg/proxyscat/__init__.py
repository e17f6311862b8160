"""proxyscat: proxy-surface scattering matrices for 2D Helmholtz multi-particle scattering."""

__version__ = "0.1.0"
