"""Cell partitions, requirement checks, bounds and lifetime simulation for GAF-style sleep scheduling."""

__version__ = "0.1.0"
