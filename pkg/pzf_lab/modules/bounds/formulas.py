from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
import pandas as pd
from scipy import optimize, special, stats

from pzf_lab.core.errors import InvalidParameterError

STAR_TAIL_FLOOR = 0.2


def path_ept_closed_form(n: int) -> float:
    """ept of the n-vertex path: n/2 + 2/3 for even n, n/2 + 1/2 for odd n."""
    if n < 3:
        raise InvalidParameterError(f"Path closed form holds for n >= 3, got n={n}")
    return n / 2 + (2 / 3 if n % 2 == 0 else 1 / 2)


def _check_range(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise InvalidParameterError(f"Expected 1 <= k <= n, got n={n}, k={k}")


def lower_bound_loglog(n: int, k: int) -> float:
    _check_range(n, k)
    return max(0.0, math.log2(math.log2(2 * n)) - math.log2(math.log2(2 * k)))


def throttling_lower_bound(n: int) -> float:
    return lower_bound_loglog(n, 1)


def upper_bounds(n: int, k: int) -> Tuple[float, float]:
    """(n - k, e/(e - 1) * (n - k))."""
    _check_range(n, k)
    linear = float(n - k)
    return linear, math.e / (math.e - 1.0) * linear


def _check_star(n: int, k: int) -> None:
    if n < 1 or not 0 <= k < n:
        raise InvalidParameterError(f"Star needs n >= 1 leaves and 0 <= k < n, got n={n}, k={k}")


def star_threshold(n: int, k: int) -> float:
    _check_star(n, k)
    return (k + 1) / 6 if 3 * k <= n else (n - k) / 6


def expected_star_increase(n: int, k: int) -> float:
    """E[X] for X ~ Bin(n - k, (k + 1)/n): white leaves the center forces in one step."""
    _check_star(n, k)
    return (n - k) * (k + 1) / n


def star_increase_tail(n: int, k: int) -> float:
    """P(X >= threshold) on a star with n leaves, k blue leaves and a blue center."""
    _check_star(n, k)
    trials = n - k
    first = math.ceil(star_threshold(n, k) - 1e-12)
    if first > trials:
        return 0.0
    successes = np.arange(first, trials + 1)
    log_terms = stats.binom.logpmf(successes, trials, (k + 1) / n)
    return float(min(1.0, math.exp(special.logsumexp(log_terms))))


def star_tail_grid(n_max: int, n_min: int = 3) -> pd.DataFrame:
    rows = []
    for n in range(n_min, n_max + 1):
        for k in range(n):
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "threshold": star_threshold(n, k),
                    "expected_increase": expected_star_increase(n, k),
                    "tail": star_increase_tail(n, k),
                }
            )
    frame = pd.DataFrame(rows, columns=["n", "k", "threshold", "expected_increase", "tail"])
    frame["meets_floor"] = frame["tail"] >= STAR_TAIL_FLOOR
    return frame


@lru_cache(maxsize=1)
def step7_constant() -> float:
    """Root C > 1 of exp(4/3 * (1 - 1/C)) = C (C = 1 is the trivial root)."""
    return float(
        optimize.bisect(
            lambda c: math.exp(4.0 / 3.0 * (1.0 - 1.0 / c)) - c,
            1.1,
            4.0,
            xtol=1e-15,
            maxiter=200,
        )
    )
