"""Exact counts of virtual n-crossing types, plus brute-force oracles.

Closed forms (all exact, Python integers):

* ``bell(n)``: set partitions of the arcs, i.e. classical/virtual patterns.
* ``fragmented_count(n)``: labelled types, ``sum_k C(n-1,k-1) n!/k!``.
* ``fix_count(n, d)``: labelled types fixed by rotation through ``d`` arcs.
* ``vcount(n)``: types up to rotation, by Burnside's lemma over the cyclic group.

The brute-force side enumerates fragmented permutations explicitly and
quotients them with :func:`vmcross.crossing.canonical_type`.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterator

import mpmath
import numpy as np

from .crossing import (
    CrossingType,
    MulticrossingSpec,
    canonical_type,
    is_almost_virtual,
    almost_virtual_distance,
    rotate_type,
    validate_crossing,
)

DEFAULT_BOUND = 8


class BruteForceBoundError(ValueError):
    """Requested brute-force enumeration is above the configured bound."""


def _check_bound(n: int, bound: int):
    if n > bound:
        raise BruteForceBoundError(f"n={n} exceeds the brute-force bound {bound}")


# ---------------------------------------------------------------- arithmetic


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


# ---------------------------------------------------------------- closed forms


def bell(n: int) -> int:
    """Bell number via the Bell triangle."""
    if n < 0:
        raise ValueError("bell(n) needs n >= 0")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def fragmented_count_by_parts(n: int, k: int) -> int:
    """Fragmented permutations of n labelled arcs with exactly k parts."""
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"need n >= 1 and 1 <= k <= n, got n={n}, k={k}")
    return math.comb(n - 1, k - 1) * math.factorial(n) // math.factorial(k)


def fragmented_count(n: int) -> int:
    if n < 1:
        raise ValueError("fragmented_count(n) needs n >= 1")
    return sum(fragmented_count_by_parts(n, k) for k in range(1, n + 1))


def fix_count(n: int, d: int) -> int:
    """Labelled n-crossing types invariant under rotation by d arcs, d | n."""
    if d < 1 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    q = n // d
    fd = math.factorial(d)
    return sum(
        math.comb(d - 1, k - 1) * (fd // math.factorial(k)) * q ** (d - k)
        for k in range(1, d + 1)
    )


def burnside_sum(n: int) -> int:
    return sum(totient(n // d) * fix_count(n, d) for d in divisors(n))


def vcount(n: int) -> int:
    """Number of virtual n-crossing types up to rotation."""
    if n < 1:
        raise ValueError("vcount(n) needs n >= 1")
    total = burnside_sum(n)
    q, r = divmod(total, n)
    assert r == 0, f"Burnside sum {total} not divisible by {n}"
    return q


def vcount_prime(p: int) -> int:
    """Prime shortcut: only the all-virtual type has a nontrivial stabiliser."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q, r = divmod(fragmented_count(p) - 1, p)
    assert r == 0
    return q + 1


def almost_virtual_count(n: int, up_to_reflection: bool = False) -> int:
    if n < 2:
        raise ValueError("almost virtual crossings need n >= 2")
    return n // 2 if up_to_reflection else n - 1


def log_v_estimate(n: int) -> mpmath.mpf:
    """Natural log of n! e^(2 sqrt n) / (2 sqrt(pi e) n^(7/4))."""
    if n < 2:
        raise ValueError("v_estimate(n) needs n >= 2")
    with mpmath.workdps(30):
        return (
            mpmath.loggamma(n + 1)
            + 2 * mpmath.sqrt(n)
            - mpmath.log(2 * mpmath.sqrt(mpmath.pi * mpmath.e))
            - mpmath.mpf(7) / 4 * mpmath.log(n)
        )


def v_estimate(n: int) -> mpmath.mpf:
    """Asymptotic estimate of vcount(n) as an mpmath float (no overflow)."""
    with mpmath.workdps(30):
        return +mpmath.exp(log_v_estimate(n))


def v_ratio(n: int) -> float:
    """vcount(n) / v_estimate(n)."""
    with mpmath.workdps(30):
        return float(mpmath.mpf(vcount(n)) / v_estimate(n))


@dataclass(frozen=True)
class CountReport:
    n: int
    bell: int
    fragmented: int
    fix_by_divisor: dict[int, int]
    vcount: int
    estimate: mpmath.mpf
    ratio: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "bell": str(self.bell),
            "fragmented": str(self.fragmented),
            "fix_by_divisor": {str(d): str(v) for d, v in self.fix_by_divisor.items()},
            "vcount": str(self.vcount),
            "estimate": mpmath.nstr(self.estimate, 15),
            "ratio": self.ratio,
        }


def count_report(n: int) -> CountReport:
    if n < 2:
        raise ValueError("count_report(n) needs n >= 2")
    fixes = {d: fix_count(n, d) for d in divisors(n)}
    return CountReport(
        n=n,
        bell=bell(n),
        fragmented=fragmented_count(n),
        fix_by_divisor=fixes,
        vcount=vcount(n),
        estimate=v_estimate(n),
        ratio=v_ratio(n),
    )


# ---------------------------------------------------------------- brute force


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """Set partitions of 1..n as lists of blocks, via restricted growth strings."""
    if n == 0:
        yield []
        return

    def rec(i, blocks):
        if i > n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [])


def _orderings(blocks: list[list[int]]) -> Iterator[CrossingType]:
    n = sum(len(b) for b in blocks)
    for choice in product(*(permutations(b) for b in blocks)):
        # blocks come out of set_partitions sorted by min, and permuting a
        # block keeps its min, so the parts are already in canonical order
        yield CrossingType._unchecked(n, choice)


def labeled_types(n: int, bound: int = DEFAULT_BOUND) -> Iterator[CrossingType]:
    """Every fragmented permutation of 1..n, as a CrossingType."""
    _check_bound(n, bound)
    for blocks in set_partitions(n):
        yield from _orderings(blocks)


def _canonical_chunk(args):
    blocks_list, include_reflection = args
    return {canonical_type(t, include_reflection).parts for blocks in blocks_list for t in _orderings(blocks)}


def enumerate_types(
    n: int,
    include_reflection: bool = False,
    bound: int = DEFAULT_BOUND,
    workers: int = 1,
) -> list[CrossingType]:
    """One canonical representative per orbit, sorted by encoding."""
    if n < 2:
        raise ValueError("enumerate_types(n) needs n >= 2")
    _check_bound(n, bound)
    partitions = list(set_partitions(n))
    if workers <= 1:
        found = _canonical_chunk((partitions, include_reflection))
    else:
        chunks = [(partitions[i::workers], include_reflection) for i in range(workers)]
        found = set()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_canonical_chunk, chunks):
                found |= part
    return [CrossingType._unchecked(n, parts) for parts in sorted(found)]


def brute_force_fix_count(n: int, d: int, bound: int = DEFAULT_BOUND) -> int:
    if d < 1 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    return sum(1 for t in labeled_types(n, bound) if rotate_type(t, d) == t)


def almost_virtual_census(
    n: int, up_to_reflection: bool = False, bound: int = DEFAULT_BOUND, workers: int = 1
) -> int:
    """Orbits of almost virtual types, counted from the enumerated census."""
    census = enumerate_types(n, include_reflection=up_to_reflection, bound=bound, workers=workers)
    return sum(1 for t in census if is_almost_virtual(t))


def almost_virtual_distances(
    n: int, up_to_reflection: bool = False, bound: int = DEFAULT_BOUND, workers: int = 1
) -> list[int]:
    census = enumerate_types(n, include_reflection=up_to_reflection, bound=bound, workers=workers)
    return sorted(almost_virtual_distance(t, up_to_reflection) for t in census if is_almost_virtual(t))


def count_valid_pair_patterns(n: int, bound: int = DEFAULT_BOUND) -> int:
    """Subsets of the C(n,2) arc pairs with no two-classical-one-virtual triple.

    Every subset is tested; the triple condition is evaluated on all subsets
    at once as bit arrays.
    """
    _check_bound(n, bound)
    pairs = list(combinations(range(n), 2))
    index = {p: e for e, p in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.uint64)
    bad = np.zeros(masks.shape, dtype=bool)
    for a, b, c in combinations(range(n), 3):
        bits = sum((masks >> np.uint64(index[p])) & np.uint64(1) for p in ((a, b), (a, c), (b, c)))
        bad |= bits == 2
    return int((~bad).sum())


def count_valid_pair_patterns_slow(n: int) -> int:
    """Same count, checking each subset with validate_crossing."""
    pairs = list(combinations(range(1, n + 1), 2))
    heights = tuple(range(1, n + 1))
    total = 0
    for mask in range(1 << len(pairs)):
        classical = [p for e, p in enumerate(pairs) if mask >> e & 1]
        if validate_crossing(MulticrossingSpec(n, heights, classical)).valid:
            total += 1
    return total
