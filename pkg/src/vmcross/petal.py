"""Petal diagrams for virtual knots.

Geometry
--------
A petal diagram with ``m`` petals (``m`` odd) has ``m`` straight segments
through a common centre, joined by ``m`` non-nested loops. Segments are
numbered ``1..m`` both in clockwise angular order and in traversal order:
the loop leaving segment ``k`` re-enters the centre along the angularly
adjacent line, pointing nearly backwards. The traversal direction of segment
``k`` is the angle ``u_k * pi / m`` with::

    u_k = (k - 1) * (m + 1) mod 2m

Angles increase clockwise (screen coordinates, y pointing down). Since
``u_k = k - 1 (mod m)`` no two segments are parallel, and every crossing
sign below is exact integer arithmetic.

Sign convention: a classical crossing is positive when the frame
(over direction, under direction) is positively oriented, i.e. the under
direction lies strictly between 0 and pi ahead of the over direction.

Compilation
-----------
Walking the code, a label's first occurrence takes one segment and its second
occurrence takes two consecutive ones. For even crossing counts an extra
all-virtual segment keeps ``m`` odd. The two candidate segments of a second
occurrence always give opposite signs against the first segment, so exactly
one of them realises the required sign; that pair is made classical and
everything else virtual.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .crossing import MulticrossingSpec, forbidden_triples
from .gauss import SignedGaussCode, Token, canonicalize_gauss

Pair = tuple[int, int]


class PetalError(ValueError):
    pass


class InvalidPetalError(PetalError):
    def __init__(self, problems: Sequence[str]):
        self.problems = tuple(problems)
        super().__init__("; ".join(self.problems))


class UnsupportedDiagramError(PetalError):
    """Code extraction needs every segment to have at most one classical crossing."""


class PetalFormatError(PetalError):
    """Petal JSON does not match the schema."""


def direction_index(k: int, m: int) -> int:
    if m < 1 or m % 2 == 0:
        raise ValueError(f"petal count must be odd and positive, got {m}")
    if not 1 <= k <= m:
        raise ValueError(f"segment {k} out of range 1..{m}")
    return (k - 1) * (m + 1) % (2 * m)


def crossing_sign(over: int, under: int, m: int) -> int:
    if over == under:
        raise ValueError(f"segment {over} cannot cross itself")
    t = (direction_index(under, m) - direction_index(over, m)) % (2 * m)
    assert t % m != 0, "segments are never parallel"
    return 1 if t < m else -1


def petal_bound(n: int) -> int:
    """Petals used for an n-crossing code: 3n, or 3n+1 to keep the count odd."""
    if n < 0:
        raise ValueError("crossing count must be >= 0")
    return 3 * n if n % 2 else 3 * n + 1


@dataclass(frozen=True)
class SegmentTable:
    """Segments assigned to each token, in token order."""

    tokens: tuple[Token, ...]
    segments: tuple[tuple[int, ...], ...]
    m: int

    @property
    def dummy(self) -> int | None:
        used = sum(len(s) for s in self.segments)
        return self.m if used < self.m else None

    def rows(self) -> list[tuple[str, str]]:
        return [(str(t), " ".join(map(str, s))) for t, s in zip(self.tokens, self.segments)]


def segment_table(code: SignedGaussCode) -> SegmentTable:
    seen = set()
    segments = []
    nxt = 1
    for t in code.tokens:
        width = 1 if t.label not in seen else 2
        seen.add(t.label)
        segments.append(tuple(range(nxt, nxt + width)))
        nxt += width
    return SegmentTable(code.tokens, tuple(segments), petal_bound(code.crossings))


@dataclass(frozen=True)
class PetalDiagram:
    """``heights[s-1]`` is the height rank of segment ``s`` (1 is topmost)."""

    m: int
    heights: tuple[int, ...]
    classical_pairs: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(self.heights))
        object.__setattr__(
            self,
            "classical_pairs",
            frozenset((min(p), max(p)) for p in (tuple(q) for q in self.classical_pairs)),
        )

    def height(self, segment: int) -> int:
        return self.heights[segment - 1]

    def central_crossing(self) -> MulticrossingSpec:
        return MulticrossingSpec(self.m, self.heights, self.classical_pairs)

    def to_json(self) -> dict:
        return {
            "petals": self.m,
            "heights": list(self.heights),
            "classical_pairs": [list(p) for p in sorted(self.classical_pairs)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> PetalDiagram:
        if not isinstance(data, dict) or set(data) != {"petals", "heights", "classical_pairs"}:
            raise PetalFormatError('expected an object with keys "petals", "heights", "classical_pairs"')
        m, heights, pairs = data["petals"], data["heights"], data["classical_pairs"]
        if not _is_int(m):
            raise PetalFormatError('"petals" must be an integer')
        if not isinstance(heights, list) or not all(_is_int(h) for h in heights):
            raise PetalFormatError('"heights" must be a list of integers')
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(_is_int(x) for x in p) for p in pairs
        ):
            raise PetalFormatError('"classical_pairs" must be a list of integer pairs')
        return cls(m, tuple(heights), frozenset(tuple(p) for p in pairs))

    @classmethod
    def loads(cls, text: str) -> PetalDiagram:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PetalFormatError(f"malformed JSON: {exc}") from exc
        return cls.from_json(data)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_petal(diagram: PetalDiagram) -> list[str]:
    """Problems with ``diagram``; an empty list means valid."""
    problems = []
    m = diagram.m
    if m < 1 or m % 2 == 0:
        problems.append(f"petal count {m} is not odd and positive")
    if sorted(diagram.heights) != list(range(1, len(diagram.heights) + 1)) or len(diagram.heights) != m:
        problems.append(f"heights {list(diagram.heights)} are not a permutation of 1..{m}")
    bad_pairs = [p for p in sorted(diagram.classical_pairs) if p[0] == p[1] or not (1 <= p[0] and p[1] <= m)]
    if bad_pairs:
        problems.append(f"classical pairs out of range: {bad_pairs}")
    elif m >= 1:
        triples = forbidden_triples(m, diagram.classical_pairs)
        if triples:
            shown = ", ".join("{%d,%d,%d}" % t for t in triples[:5])
            problems.append(f"central multicrossing has forbidden triples: {shown}")
    return problems


def _classes(diagram: PetalDiagram) -> dict[int, int]:
    """Partner of each classical segment; raises if a segment has two partners."""
    partner: dict[int, int] = {}
    for s, t in sorted(diagram.classical_pairs):
        for a, b in ((s, t), (t, s)):
            if a in partner:
                raise UnsupportedDiagramError(
                    f"segment {a} has more than one classical crossing; "
                    "the code would depend on the order of crossings along the segment"
                )
            partner[a] = b
    return partner


def petal_from_gauss(code: SignedGaussCode) -> PetalDiagram:
    code = canonicalize_gauss(code)
    table = segment_table(code)
    m = table.m
    first: dict[int, tuple[Token, int]] = {}
    pairs: list[tuple[int, int]] = []  # (over, under), by label
    for tok, segs in zip(table.tokens, table.segments):
        if tok.label not in first:
            first[tok.label] = (tok, segs[0])
            continue
        first_tok, a = first[tok.label]
        matches = []
        for x in segs:
            over, under = (a, x) if first_tok.over else (x, a)
            if crossing_sign(over, under, m) == tok.sign:
                matches.append((over, under))
        assert len(matches) == 1, f"label {tok.label}: {len(matches)} candidate segments match the sign"
        pairs.append(matches[0])

    order = [s for pair in pairs for s in pair]
    used = set(order)
    order += [s for s in range(1, m + 1) if s not in used]
    heights = [0] * m
    for rank, s in enumerate(order, 1):
        heights[s - 1] = rank
    return PetalDiagram(m, tuple(heights), frozenset((min(p), max(p)) for p in pairs))


def gauss_from_petal(diagram: PetalDiagram) -> SignedGaussCode:
    """Read the signed Gauss code off by walking segments 1..m."""
    problems = validate_petal(diagram)
    if problems:
        raise InvalidPetalError(problems)
    partner = _classes(diagram)
    m = diagram.m
    labels: dict[frozenset[int], int] = {}
    tokens = []
    for s in range(1, m + 1):
        if s not in partner:
            continue
        t = partner[s]
        key = frozenset((s, t))
        label = labels.setdefault(key, len(labels) + 1)
        over, under = (s, t) if diagram.height(s) < diagram.height(t) else (t, s)
        tokens.append(Token(label, "O" if over == s else "U", crossing_sign(over, under, m)))
    return canonicalize_gauss(SignedGaussCode(tuple(tokens)))


def trivial_diagram() -> PetalDiagram:
    return PetalDiagram(1, (1,), frozenset())


def roundtrip(code: SignedGaussCode) -> tuple[SignedGaussCode, SignedGaussCode]:
    """(canonical input, code recovered from its compiled petal diagram)."""
    canonical = canonicalize_gauss(code)
    return canonical, gauss_from_petal(petal_from_gauss(canonical))


def classical_classes(diagram: PetalDiagram) -> list[list[int]]:
    """Classical classes of the central crossing, each listed topmost first."""
    adj: dict[int, set[int]] = {}
    for s, t in diagram.classical_pairs:
        adj.setdefault(s, set()).add(t)
        adj.setdefault(t, set()).add(s)
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        out.append(sorted(comp, key=diagram.height))
    return out
