"""
Minimal-rate jump processes driven by a quantum state, and the checks
that verify them.
"""

__version__ = "0.1.0"
