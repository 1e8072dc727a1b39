"""Fixtures, a random generator of valid games and brute-force oracles."""

from .fixtures import Fixture, emit, fixture, names

__all__ = ["Fixture", "emit", "fixture", "names"]
