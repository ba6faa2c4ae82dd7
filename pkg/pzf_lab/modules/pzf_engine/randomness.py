"""Counter-based randomness for the forcing process.

The draw X_{e,t} for directed edge ``e`` at step ``t`` is element ``e`` of a
Philox stream keyed by the run seed with counter offset ``t << 64``. It is a
pure function of ``(seed, e, t)``, so replays and coupled processes agree
bit for bit.
"""

from __future__ import annotations

import numpy as np

from pzf_lab.core.utils import MASK64, derive_seed


def uniform_draws(seed: int, t: int, count: int) -> np.ndarray:
    bit_generator = np.random.Philox(key=seed & MASK64, counter=t << 64)
    return np.random.Generator(bit_generator).random(count)


def uniform(seed: int, edge: int, t: int) -> float:
    return float(uniform_draws(seed, t, edge + 1)[edge])


class EdgeStream:
    """Random stream handed to ``step``: one uniform per directed edge per step."""

    def __init__(self, seed: int) -> None:
        self.seed = seed & MASK64

    def draws(self, t: int, count: int) -> np.ndarray:
        return uniform_draws(self.seed, t, count)

    def child(self, *index: int) -> "EdgeStream":
        return EdgeStream(derive_seed(self.seed, *index))
