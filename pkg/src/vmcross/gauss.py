"""Signed Gauss codes of virtual knots.

A code is a sequence of tokens such as ``O1+``: passage (``O`` over or
``U`` under), crossing label, crossing sign. Virtual crossings are not
recorded. Each label appears exactly twice, once ``O`` and once ``U``, with
the same sign both times. The empty code is the unknot.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple, Sequence


class GaussCodeError(ValueError):
    pass


class GaussSyntaxError(GaussCodeError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at byte {offset}")


class LabelCountError(GaussCodeError):
    """A label does not occur exactly twice."""


class PassageError(GaussCodeError):
    """A label is not traversed once over and once under."""


class SignMismatchError(GaussCodeError):
    """The two occurrences of a label carry different signs."""


class Token(NamedTuple):
    label: int
    passage: str  # "O" or "U"
    sign: int  # +1 or -1

    @property
    def over(self) -> bool:
        return self.passage == "O"

    def __str__(self):
        return f"{self.passage}{self.label}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class SignedGaussCode:
    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        tokens = tuple(Token(*t) for t in self.tokens)
        object.__setattr__(self, "tokens", tokens)
        _check(tokens)

    @property
    def crossings(self) -> int:
        return len(self.tokens) // 2

    def labels(self) -> list[int]:
        """Labels in order of first appearance."""
        return list(dict.fromkeys(t.label for t in self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return format_gauss(self)


def _check(tokens: Sequence[Token]):
    for t in tokens:
        if t.passage not in ("O", "U"):
            raise PassageError(f"passage must be 'O' or 'U', got {t.passage!r}")
        if t.sign not in (1, -1):
            raise SignMismatchError(f"sign must be +1 or -1, got {t.sign!r}")
        if not isinstance(t.label, int) or t.label < 1:
            raise LabelCountError(f"labels must be positive integers, got {t.label!r}")
    counts = Counter(t.label for t in tokens)
    wrong = sorted(label for label, c in counts.items() if c != 2)
    if wrong:
        label = wrong[0]
        raise LabelCountError(f"label {label} occurs {counts[label]} time(s), expected 2")
    seen: dict[int, Token] = {}
    for t in tokens:
        first = seen.setdefault(t.label, t)
        if first is t:
            continue
        if first.passage == t.passage:
            raise PassageError(f"label {t.label} is traversed {t.passage} twice")
        if first.sign != t.sign:
            raise SignMismatchError(f"label {t.label} has signs {str(first)[-1]} and {str(t)[-1]}")


_TOKEN = re.compile(r"([OU])(\d+)([+-])")
_SPACE = re.compile(r"\s*")


def parse_gauss(text: str) -> SignedGaussCode:
    """Parse ``O1+U2+U1+O2+``; whitespace between tokens is allowed."""
    tokens = []
    pos = _SPACE.match(text, 0).end()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            offset = len(text[:pos].encode("utf-8"))
            raise GaussSyntaxError(f"expected a token like O1+ but found {text[pos:pos + 6]!r}", offset)
        label = int(m.group(2))
        if label < 1:
            raise GaussSyntaxError("crossing labels must be positive", len(text[:pos].encode("utf-8")))
        tokens.append(Token(label, m.group(1), 1 if m.group(3) == "+" else -1))
        pos = _SPACE.match(text, m.end()).end()
    return SignedGaussCode(tuple(tokens))


def format_gauss(code: SignedGaussCode) -> str:
    return "".join(map(str, code.tokens))


def canonicalize_gauss(code: SignedGaussCode) -> SignedGaussCode:
    """Relabel crossings 1, 2, ... in order of first appearance."""
    relabel = {label: i for i, label in enumerate(code.labels(), 1)}
    return SignedGaussCode(tuple(t._replace(label=relabel[t.label]) for t in code.tokens))


def random_gauss_code(n: int, rng: random.Random | None = None) -> SignedGaussCode:
    """A uniformly shuffled valid canonical code with n crossings."""
    rng = rng or random.Random()
    slots = [c for c in range(1, n + 1) for _ in range(2)]
    rng.shuffle(slots)
    first_over = {c: rng.random() < 0.5 for c in range(1, n + 1)}
    signs = {c: rng.choice((1, -1)) for c in range(1, n + 1)}
    seen = set()
    tokens = []
    for c in slots:
        over = first_over[c] if c not in seen else not first_over[c]
        seen.add(c)
        tokens.append(Token(c, "O" if over else "U", signs[c]))
    return canonicalize_gauss(SignedGaussCode(tuple(tokens)))


def _pairings(slots: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not slots:
        yield []
        return
    first, rest = slots[0], slots[1:]
    for k, partner in enumerate(rest):
        for more in _pairings(rest[:k] + rest[k + 1:]):
            yield [(first, partner)] + more


def all_canonical_codes(n: int) -> Iterator[SignedGaussCode]:
    """Every canonical code with n crossings: (2n-1)!! * 4^n of them."""
    for pairing in _pairings(list(range(2 * n))):
        # pairing is ordered by first slot, so labels come out canonical
        for overs, signs in product(product((True, False), repeat=n), product((1, -1), repeat=n)):
            tokens: list[Token | None] = [None] * (2 * n)
            for c, (a, b) in enumerate(pairing):
                tokens[a] = Token(c + 1, "O" if overs[c] else "U", signs[c])
                tokens[b] = Token(c + 1, "U" if overs[c] else "O", signs[c])
            yield SignedGaussCode(tuple(tokens))
