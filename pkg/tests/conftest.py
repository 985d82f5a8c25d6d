from __future__ import annotations

import pytest

from matchdex.scoring import MatchFormat, automaton


@pytest.fixture(scope="session")
def fmt5() -> MatchFormat:
    return MatchFormat(best_of=5)


@pytest.fixture(scope="session")
def fmt3() -> MatchFormat:
    return MatchFormat(best_of=3)


@pytest.fixture(scope="session")
def auto5(fmt5):
    return automaton(fmt5)


@pytest.fixture(scope="session")
def auto3(fmt3):
    return automaton(fmt3)
