from pathlib import Path

import pytest

from ccbox.frontend import parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
REJECTED = {"leak", "universal_tapp", "pair_tunnel_reject"}


def corpus_files():
    return sorted(CORPUS.glob("*.ccbox"))


def accepted_files():
    return [p for p in corpus_files() if p.stem not in REJECTED]


def load(name: str):
    return parse((CORPUS / f"{name}.ccbox").read_text(encoding="utf-8"))


@pytest.fixture
def corpus():
    return CORPUS


class HypothesisSource:
    """Feeds generator draws from hypothesis so its shrinker drives the choices."""

    def __init__(self, data):
        from hypothesis import strategies as st

        self._data = data
        self._ints = st.integers
        self.record: list[int] = []

    def draw(self, n: int) -> int:
        v = self._data.draw(self._ints(0, n - 1)) if n > 1 else 0
        self.record.append(v)
        return v
