"""Explicit decompositions of entries of GL_n, O_2n and U_2n matrices over finite
commutative rings into products of elementary conjugates."""

__version__ = "0.1.0"
