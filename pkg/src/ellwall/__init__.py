"""Exact-arithmetic toolkit for elliptic root systems, stability walls on
Hilbert schemes of equivariant elliptic surfaces, a truncated toroidal Fock
model, and the local cyclic-orbifold bimodule calculus.

Everything is computed over Q (or Q adjoined a root of unity); no floats
enter any mathematical path.
"""

__version__ = "0.1.0"
