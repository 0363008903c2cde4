"""mipgeo: geometric non-isomorphism tests for modular group algebras."""

__version__ = "0.1.0"
