from __future__ import annotations

import time
from contextlib import contextmanager
from functools import lru_cache

import pytest

from unawaregames.corpus import fixtures
from unawaregames.corpus.generate import standard_corpus


@lru_cache(maxsize=None)
def generated():
    return tuple(standard_corpus())


def fixture_games(names):
    return [(n, fixtures.fixture(n).game) for n in names]


def valid_corpus():
    """Every game that passes all validators, perfect recall included."""
    return fixture_games(fixtures.VALID) + list(generated())


def whole_corpus():
    """Every fixture (valid or not) plus the generated games."""
    return fixture_games(fixtures.names()) + list(generated())


@contextmanager
def within(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"


@pytest.fixture
def fx():
    return fixtures.fixture
