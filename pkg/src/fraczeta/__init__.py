"""Complex dimensions of subsets of metric measure spaces via tube and distance zeta functions."""
__version__ = "0.1.0"
