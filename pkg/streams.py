"""
Deterministyczne strumienie losowe i równoległe mapowanie z zachowaniem kolejności.

Podstrumień j ziarna s dostaje własne 64-bitowe ziarno wyprowadzone mieszaniem
SplitMix64 pary (s, j), więc wynik nie zależy od podziału pracy między wątki.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np

from config import PARALLEL_CONFIG

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")
U = TypeVar("U")

logger = logging.getLogger(__name__)


def splitmix64(x: int) -> int:
    """Jeden krok finalizera SplitMix64."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def subseed(seed: int, index: int) -> int:
    """Ziarno podstrumienia `index` dla ziarna głównego `seed`."""
    base = splitmix64(int(seed) & MASK64)
    return splitmix64((base + (int(index) + 1) * GOLDEN_GAMMA) & MASK64)


def rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(subseed(seed, index))


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = PARALLEL_CONFIG["workers"]
    return max(1, int(workers))


def ordered_map(fn: Callable[[T], U], items: Iterable[T], workers: Optional[int] = None) -> List[U]:
    """
    Mapuje fn po elementach, opcjonalnie w ThreadPoolExecutor.
    Wyniki zawsze w kolejności wejścia.
    """
    items = list(items)
    workers = resolve_workers(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug(f"ordered_map: {len(items)} zadań na {workers} wątkach")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def chunk_bounds(total: int, chunk_size: Optional[int] = None) -> List[range]:
    """Dzieli [0, total) na stałe kawałki; ostatni może być krótszy."""
    size = chunk_size or PARALLEL_CONFIG["chunk_size"]
    return [range(start, min(start + size, total)) for start in range(0, total, size)]
