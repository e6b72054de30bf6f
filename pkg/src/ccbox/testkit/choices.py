"""Choice sequences: the single source of randomness for generators.

Generators only ever call ``draw(n)``. Recording those draws gives a replayable
trace, and shrinking edits the trace instead of the generated value, so a
shrunk case is always something the generator could have produced. Choice 0
is always the simplest option.
"""

from __future__ import annotations

import random
from typing import Callable, Protocol


class ChoiceSource(Protocol):
    def draw(self, n: int) -> int: ...


class RandomSource:
    def __init__(self, seed):
        self._rng = random.Random(seed)
        self.record: list[int] = []

    def draw(self, n: int) -> int:
        v = self._rng.randrange(n) if n > 1 else 0
        self.record.append(v)
        return v


class ReplaySource:
    """Replays a recorded trace; past its end every draw is 0."""

    def __init__(self, choices):
        self.choices = list(choices)
        self.pos = 0
        self.record: list[int] = []

    def draw(self, n: int) -> int:
        v = self.choices[self.pos] if self.pos < len(self.choices) else 0
        self.pos += 1
        v = min(v, n - 1) if n > 0 else 0
        self.record.append(v)
        return v


def case_seed(seed: int, name: str, index: int) -> str:
    # str seeds are hashed with SHA-512 by random.Random, stable across runs
    return f"{seed}:{name}:{index}"


def shrink(choices: list[int], fails: Callable[[list[int]], bool], budget: int = 400) -> list[int]:
    """Greedy choice-sequence minimisation; ``fails`` must hold for the input."""
    best = list(choices)
    calls = 0

    def attempt(cand) -> bool:
        nonlocal best, calls
        if calls >= budget:
            return False
        calls += 1
        if fails(cand):
            best = cand
            return True
        return False

    improved = True
    while improved and calls < budget:
        improved = False
        for k in (8, 4, 2, 1):
            i = 0
            while i + k <= len(best) and calls < budget:
                if attempt(best[:i] + best[i + k:]):
                    improved = True
                else:
                    i += 1
        for i in range(len(best)):
            v = best[i]
            for smaller in dict.fromkeys((0, v // 2, v - 1)):
                if 0 <= smaller < v:
                    cand = list(best)
                    cand[i] = smaller
                    if attempt(cand):
                        improved = True
                        break
    return best
