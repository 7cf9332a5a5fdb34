"""Pure-Python closure kernels; the fallback when the compiled core is absent.

A generator is passed as ``(arity, masks)`` where ``masks[i]`` is the bitmask
of values allowed at argument cell ``i`` (a singleton mask per cell for an
ordinary function).  Traces are equal-length tuples; generators act on them
position by position.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from clonekit.errors import CapacityError

Trace = tuple[int, ...]
Gen = tuple[int, Sequence[int]]


def _prepare(k: int, gen: Gen):
    arity, masks = gen
    values = []
    single = []
    for mask in masks:
        vals = tuple(v for v in range(k) if mask >> v & 1)
        values.append(vals)
        single.append(vals[0] if len(vals) == 1 else -1)
    explicit = all(s >= 0 for s in single)
    return arity, tuple(single), tuple(values), explicit


def _arg_indices(k: int, args: Sequence[Trace]) -> list[int]:
    if len(args) == 1:
        return list(args[0])
    if len(args) == 2:
        a, b = args
        return [x * k + y for x, y in zip(a, b)]
    if len(args) == 3:
        a, b, c = args
        kk = k * k
        return [x * kk + y * k + z for x, y, z in zip(a, b, c)]
    out = list(args[0])
    for t in args[1:]:
        out = [i * k + v for i, v in zip(out, t)]
    return out


def _images(k: int, prepared, args: Sequence[Trace]) -> Iterator[Trace]:
    _, single, values, explicit = prepared
    idx = _arg_indices(k, args)
    if explicit:
        yield tuple(single[i] for i in idx)
        return
    base = [single[i] for i in idx]
    free = sorted({i for i in idx if single[i] < 0})
    if not free:
        yield tuple(base)
        return
    where = [(c, free.index(i)) for c, i in enumerate(idx) if single[i] < 0]
    for choice in itertools.product(*(values[i] for i in free)):
        for c, slot in where:
            base[c] = choice[slot]
        yield tuple(base)


def _tuples_with_max(j: int, arity: int) -> Iterator[tuple[int, ...]]:
    """All index tuples over ``0..j`` whose largest entry is ``j``, each once."""
    for p in range(arity):
        if p > 0 and j == 0:
            continue
        ranges = [range(j)] * p + [(j,)] + [range(j + 1)] * (arity - p - 1)
        yield from itertools.product(*ranges)


def close_traces(
    k: int,
    init: Sequence[Trace],
    gens: Sequence[Gen],
    limit: int,
    stop_at: int = 0,
) -> list[Trace]:
    """Least superset of ``init`` closed under the generators.

    Items are listed in discovery order.  ``limit`` bounds the number of items
    (``CapacityError`` past it); a positive ``stop_at`` returns as soon as that
    many items exist.
    """
    items: list[Trace] = []
    index: dict[Trace, int] = {}
    for t in init:
        t = tuple(t)
        if t not in index:
            index[t] = len(items)
            items.append(t)
    if len(items) > limit:
        raise CapacityError(len(items))
    if stop_at and len(items) >= stop_at:
        return items
    prepared = [_prepare(k, g) for g in gens]
    j = 0
    while j < len(items):
        for prep in prepared:
            for combo in _tuples_with_max(j, prep[0]):
                for image in _images(k, prep, [items[i] for i in combo]):
                    if image not in index:
                        index[image] = len(items)
                        items.append(image)
                        if len(items) > limit:
                            raise CapacityError(len(items))
                        if stop_at and len(items) >= stop_at:
                            return items
        j += 1
    return items


def first_escape(
    k: int, rows: Sequence[Trace], gens: Sequence[Gen]
) -> tuple[int, tuple[int, ...], Trace] | None:
    """First (generator, row indices, image) whose image leaves ``rows``."""
    rows = [tuple(r) for r in rows]
    present = set(rows)
    n_rows = len(rows)
    for gi, gen in enumerate(gens):
        prep = _prepare(k, gen)
        for combo in itertools.product(range(n_rows), repeat=prep[0]):
            for image in _images(k, prep, [rows[i] for i in combo]):
                if image not in present:
                    return gi, combo, image
    return None
