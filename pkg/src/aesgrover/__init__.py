"""Reversible AES circuits, Clifford+T lowering and Grover key-search cost estimates."""

__version__ = "0.1.0"
