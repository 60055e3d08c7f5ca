"""Result ordering: relevance ranking or seeded random shuffle.

The ranked strategy sorts by matched encodings (more is better), then by
the chart's surplus encodings (fewer is better), then by chart id so the
order is total. The randomized strategy, the default, is a Fisher-Yates
shuffle driven by splitmix64 so a seed reproduces its order on any
platform or runtime.
"""

from dataclasses import dataclass

RANKED = "ranked"
RANDOMIZED = "randomized"

DEFAULT_SEED = 0

_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class OrderingStrategy:
    name: str = RANDOMIZED
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.name not in (RANKED, RANDOMIZED):
            raise ValueError(f"unknown strategy {self.name!r}")


class SplitMix64:
    """Tiny deterministic PRNG; state advances by the golden-gamma step."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


def shuffled(items: list, seed: int) -> list:
    """Fisher-Yates shuffle of a copy of *items*, deterministic per seed."""
    out = list(items)
    rng = SplitMix64(seed)
    for i in range(len(out) - 1, 0, -1):
        j = rng.below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def order_results(results: list, strategy: OrderingStrategy) -> list:
    """Order matched results; never drops or duplicates entries."""
    if strategy.name == RANKED:
        return sorted(results, key=lambda r: r.sort_key())
    return shuffled(results, strategy.seed)
