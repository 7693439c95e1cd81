"""Poset construction D(P), cellular chain complexes and cellular resolutions of monomial ideals."""

__version__ = "0.1.0"
