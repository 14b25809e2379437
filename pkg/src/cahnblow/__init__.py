"""Blow-up, similarity profiles and steady states of fourth-order Cahn-Hilliard-type equations."""

__version__ = "0.1.0"
