"""Virtual multicrossings and their types.

A virtual n-crossing is ``n`` straight arcs through a common point, labelled
clockwise ``1..n``. Each arc has a height rank (1 is topmost) and every pair
of arcs crosses either classically or virtually. Pairs that cross classically
must form disjoint cliques; equivalently, no three arcs have exactly one
virtual and two classical crossings among them.

A :class:`MulticrossingSpec` is the concrete object (heights plus classical
pairs). A :class:`CrossingType` forgets the heights of arcs that never cross
classically: it is a set partition of the positions into classes, each class
ordered top to bottom (a fragmented permutation).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Pair = tuple[int, int]


class CrossingError(ValueError):
    """Base class for problems with crossing data."""


class MalformedCrossingError(CrossingError):
    """Structural problem: bad heights, bad pair, or n < 2."""


class InvalidCrossingError(CrossingError):
    """Well-formed, but has a forbidden triple (two classical, one virtual)."""

    def __init__(self, triples: Sequence[tuple[int, int, int]]):
        self.triples = tuple(triples)
        shown = ", ".join("{%d,%d,%d}" % t for t in self.triples[:5])
        more = "" if len(self.triples) <= 5 else f" (+{len(self.triples) - 5} more)"
        super().__init__(f"forbidden triples: {shown}{more}")


class NotationError(CrossingError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


def _normalize_pairs(n: int, pairs: Iterable[Sequence[int]]) -> frozenset[Pair]:
    out = set()
    for p in pairs:
        if len(p) != 2:
            raise MalformedCrossingError(f"pair {tuple(p)!r} does not have two members")
        i, j = int(p[0]), int(p[1])
        if i == j:
            raise MalformedCrossingError(f"pair ({i},{j}) repeats a position")
        if not (1 <= i <= n and 1 <= j <= n):
            raise MalformedCrossingError(f"pair ({i},{j}) out of range 1..{n}")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


@dataclass(frozen=True)
class MulticrossingSpec:
    """A concrete virtual n-crossing.

    ``heights[i-1]`` is the height rank of the arc at clockwise position ``i``.
    Only the classical pairs are stored; every other pair is virtual.
    Structure is checked on construction, validity is not (see
    :func:`validate_crossing`).
    """

    n: int
    heights: tuple[int, ...]
    classical_pairs: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 2:
            raise MalformedCrossingError(f"a multicrossing needs n >= 2 arcs, got {self.n}")
        heights = tuple(int(h) for h in self.heights)
        if len(heights) != self.n:
            raise MalformedCrossingError(f"expected {self.n} heights, got {len(heights)}")
        if sorted(heights) != list(range(1, self.n + 1)):
            raise MalformedCrossingError(f"heights {heights} are not a permutation of 1..{self.n}")
        object.__setattr__(self, "heights", heights)
        object.__setattr__(self, "classical_pairs", _normalize_pairs(self.n, self.classical_pairs))

    @classmethod
    def from_virtual_pairs(cls, heights: Sequence[int], virtual_pairs: Iterable[Sequence[int]]):
        n = len(heights)
        if n < 2:
            raise MalformedCrossingError(f"a multicrossing needs n >= 2 arcs, got {n}")
        virtual = _normalize_pairs(n, virtual_pairs)
        classical = frozenset(combinations(range(1, n + 1), 2)) - virtual
        return cls(n, tuple(heights), classical)

    @property
    def virtual_pairs(self) -> frozenset[Pair]:
        return frozenset(combinations(range(1, self.n + 1), 2)) - self.classical_pairs

    def height(self, position: int) -> int:
        return self.heights[position - 1]

    def __str__(self):
        return format_crossing_notation(self)


@dataclass(frozen=True)
class CrossingVerdict:
    valid: bool
    offending_triples: tuple[tuple[int, int, int], ...] = ()

    def __bool__(self):
        return self.valid


def _adjacency(n: int, pairs: Iterable[Pair]) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(n + 1)]
    for i, j in pairs:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def _components(n: int, adj: list[set[int]]) -> list[list[int]]:
    seen = [False] * (n + 1)
    comps = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def forbidden_triples(n: int, classical_pairs: Iterable[Pair]) -> list[tuple[int, int, int]]:
    """All triples with exactly two classical pairs, sorted.

    Such a triple is a path ``i - j - k`` in the classical graph with ``i, k``
    not adjacent, so it suffices to look at pairs of neighbours.
    """
    adj = _adjacency(n, classical_pairs)
    found = set()
    for j in range(1, n + 1):
        for i, k in combinations(sorted(adj[j]), 2):
            if k not in adj[i]:
                found.add(tuple(sorted((i, j, k))))
    return sorted(found)


def validate_crossing(spec: MulticrossingSpec) -> CrossingVerdict:
    """Check the no-forbidden-triple condition on ``spec``."""
    triples = forbidden_triples(spec.n, spec.classical_pairs)
    return CrossingVerdict(not triples, tuple(triples))


# ---------------------------------------------------------------- types


def _sort_parts(parts: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(p) for p in parts), key=min))


@dataclass(frozen=True)
class CrossingType:
    """Fragmented permutation of the positions ``1..n``.

    ``parts`` are the classical classes, each listed topmost first. They are
    kept sorted by smallest member, so equal types compare equal.
    """

    n: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 2:
            raise MalformedCrossingError(f"a multicrossing needs n >= 2 arcs, got {self.n}")
        if any(len(p) == 0 for p in self.parts):
            raise MalformedCrossingError("empty part")
        parts = _sort_parts(self.parts)
        members = [i for p in parts for i in p]
        if sorted(members) != list(range(1, self.n + 1)):
            raise MalformedCrossingError(f"parts {parts} do not partition 1..{self.n}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def _unchecked(cls, n: int, parts: tuple[tuple[int, ...], ...]) -> CrossingType:
        # parts must already be sorted by min; used by hot loops
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "parts", parts)
        return obj

    def encoding(self) -> tuple[tuple[int, ...], ...]:
        """Deterministic sort key; lexicographic comparison is the census order."""
        return self.parts

    def part_sizes(self) -> list[int]:
        return sorted((len(p) for p in self.parts), reverse=True)

    def classical_pairs(self) -> frozenset[Pair]:
        return frozenset((min(a, b), max(a, b)) for p in self.parts for a, b in combinations(p, 2))

    def to_spec(self) -> MulticrossingSpec:
        """A representative concrete crossing: parts stacked top to bottom in order."""
        heights = [0] * self.n
        rank = 1
        for part in self.parts:
            for pos in part:
                heights[pos - 1] = rank
                rank += 1
        return MulticrossingSpec(self.n, tuple(heights), self.classical_pairs())

    def __str__(self):
        return "|".join(",".join(map(str, p)) for p in self.parts)


class TripleType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class PairCrossing:
    """One constituent 2-crossing. ``over`` is None for a virtual crossing."""

    i: int
    j: int
    over: int | None = None

    @property
    def classical(self) -> bool:
        return self.over is not None

    @property
    def under(self) -> int | None:
        if self.over is None:
            return None
        return self.j if self.over == self.i else self.i

    def __str__(self):
        if self.over is None:
            return f"({self.i},{self.j}) virtual"
        return f"{self.over} over {self.under}"


def to_type(spec: MulticrossingSpec) -> CrossingType:
    verdict = validate_crossing(spec)
    if not verdict.valid:
        raise InvalidCrossingError(verdict.offending_triples)
    comps = _components(spec.n, _adjacency(spec.n, spec.classical_pairs))
    return CrossingType(spec.n, tuple(tuple(sorted(c, key=spec.height)) for c in comps))


def resolve(ctype: CrossingType) -> list[PairCrossing]:
    """The C(n,2) pairwise crossings, in lexicographic order of positions."""
    rank = {}
    part_of = {}
    for idx, part in enumerate(ctype.parts):
        for r, pos in enumerate(part):
            rank[pos] = r
            part_of[pos] = idx
    out = []
    for i, j in combinations(range(1, ctype.n + 1), 2):
        if part_of[i] == part_of[j]:
            out.append(PairCrossing(i, j, i if rank[i] < rank[j] else j))
        else:
            out.append(PairCrossing(i, j))
    return out


def classify_triple(ctype: CrossingType) -> TripleType:
    if ctype.n != 3:
        raise CrossingError(f"triple crossing classification needs n = 3, got {ctype.n}")
    return {1: TripleType.I, 2: TripleType.II, 3: TripleType.III}[len(ctype.parts)]


def is_almost_virtual(ctype: CrossingType) -> bool:
    sizes = ctype.part_sizes()
    return sizes[0] == 2 and (len(sizes) == 1 or sizes[1] == 1)


def almost_virtual_distance(ctype: CrossingType, up_to_reflection: bool = False) -> int:
    """Clockwise distance from the over arc to the under arc of the classical pair."""
    if not is_almost_virtual(ctype):
        raise CrossingError(f"type {ctype} is not almost virtual")
    over, under = next(p for p in ctype.parts if len(p) == 2)
    d = (under - over) % ctype.n
    return min(d, ctype.n - d) if up_to_reflection else d


def rotate_type(ctype: CrossingType, r: int) -> CrossingType:
    n = ctype.n
    r %= n
    if r == 0:
        return ctype
    parts = _sort_parts(tuple((i - 1 + r) % n + 1 for i in p) for p in ctype.parts)
    return CrossingType._unchecked(n, parts)


def reflect_type(ctype: CrossingType) -> CrossingType:
    n = ctype.n
    parts = _sort_parts(tuple(n + 1 - i for i in p) for p in ctype.parts)
    return CrossingType._unchecked(n, parts)


def orbit(ctype: CrossingType, include_reflection: bool = False) -> list[CrossingType]:
    images = [rotate_type(ctype, r) for r in range(ctype.n)]
    if include_reflection:
        flipped = reflect_type(ctype)
        images += [rotate_type(flipped, r) for r in range(ctype.n)]
    return images


def canonical_type(ctype: CrossingType, include_reflection: bool = False) -> CrossingType:
    return min(orbit(ctype, include_reflection), key=CrossingType.encoding)


# ---------------------------------------------------------------- notation

_TOKEN = re.compile(r"\s*(?:(\d+)|(\S))?")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            if m.group(2) not in "{};(),":
                raise NotationError(f"unexpected character {m.group(2)!r}", m.start(2))
            tokens.append((m.group(2), m.group(2), m.start(2)))
        else:
            break
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_crossing_notation(text: str) -> MulticrossingSpec:
    """Parse ``{1243; (1,2), (1,3), (2,4), (3,4)}``.

    The pairs listed are the *virtual* pairs. Heights are single digits
    written contiguously, or comma separated integers (needed for n >= 10).
    """
    tokens = _tokenize(text)
    k = 0

    def expect(kind):
        nonlocal k
        tok = tokens[k]
        if tok[0] != kind:
            want = "integer" if kind == "int" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise NotationError(f"expected {want}, found {got}", tok[2])
        k += 1
        return tok

    expect("{")
    heights: list[int] = []
    first = expect("int")
    if tokens[k][0] == ",":
        heights.append(int(first[1]))
        while tokens[k][0] == ",":
            k += 1
            heights.append(int(expect("int")[1]))
    else:
        heights = [int(c) for c in first[1]]
    height_pos = first[2]
    expect(";")
    pairs: list[tuple[int, int, int]] = []
    if tokens[k][0] == "(":
        while True:
            start = expect("(")[2]
            i = int(expect("int")[1])
            expect(",")
            j = int(expect("int")[1])
            expect(")")
            pairs.append((i, j, start))
            if tokens[k][0] != ",":
                break
            k += 1
    expect("}")
    expect("end")

    n = len(heights)
    if n < 2:
        raise NotationError(f"a multicrossing needs n >= 2 arcs, got {n}", height_pos)
    if sorted(heights) != list(range(1, n + 1)):
        raise NotationError(f"heights {heights} are not a permutation of 1..{n}", height_pos)
    seen = set()
    for i, j, start in pairs:
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise NotationError(f"pair ({i},{j}) out of range for n={n}", start)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise NotationError(f"duplicate pair ({i},{j})", start)
        seen.add(key)
    return MulticrossingSpec.from_virtual_pairs(heights, seen)


def format_crossing_notation(spec: MulticrossingSpec) -> str:
    if spec.n <= 9:
        hs = "".join(map(str, spec.heights))
    else:
        hs = ",".join(map(str, spec.heights))
    pairs = ", ".join(f"({i},{j})" for i, j in sorted(spec.virtual_pairs))
    return "{%s; %s}" % (hs, pairs)
