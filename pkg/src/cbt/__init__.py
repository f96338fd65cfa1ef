"""A proof-checker kernel for an extensional dependent type theory, with a finite-set model."""

__version__ = "0.1.0"
