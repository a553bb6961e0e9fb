"""Proof-theory workbench: ordinal notations below epsilon_0, finite and
infinitary sequent calculi with cut elimination, and binary-tree embeddings."""

__version__ = '0.1.0'
