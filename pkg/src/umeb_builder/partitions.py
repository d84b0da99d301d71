"""Enumeration of the partition specs d' = a_1 + ... + a_s + r feeding theorem2_construct."""

from itertools import permutations
from typing import Iterator, List, Tuple

from .constructions import PartitionSpec


def _partitions(total: int, min_part: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    """Non-increasing tuples of parts in [min_part, max_part] summing to total."""
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), min_part - 1, -1):
        for rest in _partitions(total - first, min_part, first):
            yield (first,) + rest


def enumerate_partitions(d: int, d_prime: int, ordered: bool = False) -> List[PartitionSpec]:
    """
    All specs with every a_i >= d and 0 < r < d, sorted by (r, parts).

    By default parts form a multiset reported in non-increasing order; with
    ordered=True every distinct ordering of the parts is its own spec, since
    different block layouts give different bases.
    """
    if d >= d_prime:
        raise ValueError(f"d must be < d' (got d={d}, d'={d_prime})")
    if d < 2:
        raise ValueError(f"d must be >= 2 (got d={d})")

    keys: List[Tuple[int, Tuple[int, ...]]] = []
    for r in range(1, d):
        total = d_prime - r
        for parts in _partitions(total, d, total):
            if ordered:
                keys.extend((r, p) for p in set(permutations(parts)))
            else:
                keys.append((r, parts))

    return [PartitionSpec(d, d_prime, parts, r) for r, parts in sorted(keys)]
