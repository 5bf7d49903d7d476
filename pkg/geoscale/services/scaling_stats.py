# geoscale/services/scaling_stats.py
"""
Head/tail breaks, ht-index, Zipf series and rank-size tables.

Heads are the values strictly greater than the mean; values equal to the mean
stay in the tail.
"""
import json
import logging
from typing import List

import numpy as np

from geoscale.core.exceptions import InputError
from geoscale.models.series import HeadTailLevel, HeadTailPartition, RankSizeRow, ValueSeries

logger = logging.getLogger("geoscale.scaling_stats")

SCALING_HT_INDEX = 3


def head_tail_breaks(s: ValueSeries, head_limit: float = 0.4) -> HeadTailPartition:
    """
    Recursively split around the arithmetic mean.

    Recursion continues on the head while it has at least 2 members and its
    share of the current level stays within head_limit. An over-limit or empty
    head is recorded as a rejected level and ends the recursion.
    """
    if len(s.values) == 0:
        raise InputError("head/tail breaks needs a non-empty series")
    if not 0 < head_limit < 1:
        raise InputError(f"head_limit must lie in (0, 1), got {head_limit}")

    values = np.asarray(s.values, dtype=float)
    indices = np.arange(len(values))
    classes = np.zeros(len(values), dtype=int)
    levels: List[HeadTailLevel] = []

    current = indices
    while len(current) >= 2:
        mean = float(values[current].mean())
        head = current[values[current] > mean]
        fraction = len(head) / len(current)
        accepted = 0 < len(head) and fraction <= head_limit
        levels.append(HeadTailLevel(
            mean=mean,
            head_count=len(head),
            tail_count=len(current) - len(head),
            head_fraction=fraction,
            accepted=accepted,
        ))
        logger.debug(f"Level {len(levels)}: mean={mean!r} head={len(head)}/{len(current)} "
                     f"accepted={accepted}")
        if not accepted:
            break
        classes[head] = len(levels)
        current = head

    partition = HeadTailPartition(
        levels=levels,
        class_assignment={int(i): int(c) for i, c in zip(indices, classes)},
        head_limit=head_limit,
    )
    logger.info(f"Head/tail breaks on {len(values)} values: ht-index {partition.ht_index}")
    return partition


def ht_index(s: ValueSeries, head_limit: float = 0.4) -> int:
    """Number of hierarchical levels (accepted splits + 1)"""
    return head_tail_breaks(s, head_limit).ht_index


def is_scaling(s: ValueSeries, head_limit: float = 0.4) -> bool:
    """A series with far more small values than large ones at least twice over"""
    return ht_index(s, head_limit) >= SCALING_HT_INDEX


def zipf_series(n: int) -> ValueSeries:
    """[1, 1/2, 1/3, ..., 1/n]"""
    if n < 1:
        raise InputError(f"zipf series needs n >= 1, got {n}")
    return ValueSeries(values=[1.0 / k for k in range(1, n + 1)], label=f"zipf-{n}")


def rank_size_table(s: ValueSeries) -> List[RankSizeRow]:
    """Values sorted descending with ranks 1..n; ties keep input order"""
    if len(s.values) == 0:
        raise InputError("rank-size table needs a non-empty series")
    ordered = sorted(range(len(s.values)), key=lambda i: -s.values[i])
    return [RankSizeRow(rank=rank, value=s.values[i]) for rank, i in enumerate(ordered, start=1)]


def partition_json(partition: HeadTailPartition) -> str:
    return json.dumps(partition.to_json_dict(), indent=1)
