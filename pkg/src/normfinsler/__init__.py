"""Root-system case analysis and curvature numerics for normal homogeneous Finsler spaces."""

__version__ = "0.1.0"
