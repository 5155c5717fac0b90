"""Exact symbolic checks for a three-parameter deformed oscillator algebra,
its two differential calculi and the quantum group that leaves them invariant."""

__version__ = "0.1.0"
