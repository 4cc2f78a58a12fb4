import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from vmcross.crossing import to_type
from vmcross.gauss import all_canonical_codes, format_gauss, parse_gauss, random_gauss_code
from vmcross.petal import (
    InvalidPetalError,
    PetalDiagram,
    PetalFormatError,
    UnsupportedDiagramError,
    classical_classes,
    crossing_sign,
    direction_index,
    gauss_from_petal,
    petal_bound,
    petal_from_gauss,
    segment_table,
    trivial_diagram,
    validate_petal,
)

VIRTUAL_TREFOIL = "O1+U2+U1+O2+"
THREE_CROSSING = "O1+U2+U1+O3-O2+U3-"


def float_sign(over, under, m):
    """Orientation of (over, under) from actual direction vectors."""
    a = ((over - 1) * (m + 1) % (2 * m)) * math.pi / m
    b = ((under - 1) * (m + 1) % (2 * m)) * math.pi / m
    cross = math.cos(a) * math.sin(b) - math.sin(a) * math.cos(b)
    assert abs(cross) > 1e-9
    return 1 if cross > 0 else -1


def test_direction_index_examples():
    assert [direction_index(k, 5) for k in range(1, 6)] == [0, 6, 2, 8, 4]
    assert [direction_index(k, 3) for k in range(1, 4)] == [0, 4, 2]


@pytest.mark.parametrize("m", range(1, 102, 2))
def test_direction_lines_distinct(m):
    assert sorted(direction_index(k, m) % m for k in range(1, m + 1)) == list(range(m))


def test_direction_index_range():
    with pytest.raises(ValueError):
        direction_index(0, 5)
    with pytest.raises(ValueError):
        direction_index(6, 5)
    with pytest.raises(ValueError):
        direction_index(1, 4)


def test_crossing_sign_examples():
    assert crossing_sign(1, 3, 5) == 1
    assert crossing_sign(1, 2, 5) == -1
    assert crossing_sign(3, 1, 5) == -1
    with pytest.raises(ValueError):
        crossing_sign(2, 2, 5)


@pytest.mark.parametrize("m", [3, 5, 7, 9, 25, 51])
def test_crossing_sign_matches_geometry(m):
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if a != b:
                assert crossing_sign(a, b, m) == float_sign(a, b, m)


@pytest.mark.parametrize("m", range(3, 102, 2))
def test_sign_antisymmetry(m):
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if a != b:
                assert crossing_sign(a, b, m) == -crossing_sign(b, a, m)


@pytest.mark.parametrize("m", range(3, 102, 2))
def test_candidate_opposition(m):
    for b in range(1, m):
        for a in range(1, m + 1):
            if a in (b, b + 1):
                continue
            assert crossing_sign(a, b, m) == -crossing_sign(a, b + 1, m)
            assert crossing_sign(b, a, m) == -crossing_sign(b + 1, a, m)


def test_petal_bound():
    assert (petal_bound(0), petal_bound(1), petal_bound(2), petal_bound(3)) == (1, 3, 7, 9)
    assert all(petal_bound(n) % 2 == 1 for n in range(50))


def test_segment_table_three_crossings():
    table = segment_table(parse_gauss(THREE_CROSSING))
    assert table.segments == ((1,), (2,), (3, 4), (5,), (6, 7), (8, 9))
    assert table.m == 9 and table.dummy is None
    assert table.rows() == [("O1+", "1"), ("U2+", "2"), ("U1+", "3 4"), ("O3-", "5"), ("O2+", "6 7"), ("U3-", "8 9")]


def test_segment_table_virtual_trefoil():
    table = segment_table(parse_gauss(VIRTUAL_TREFOIL))
    assert table.segments == ((1,), (2,), (3, 4), (5, 6))
    assert table.m == 7 and table.dummy == 7


def test_segment_table_empty():
    table = segment_table(parse_gauss(""))
    assert table.segments == () and table.m == 1


def _expected_partner(code_text):
    """Pick the classical partner of each label with the float oracle."""
    code = parse_gauss(code_text)
    table = segment_table(code)
    first = {}
    pairs = set()
    for tok, segs in zip(table.tokens, table.segments):
        if tok.label not in first:
            first[tok.label] = (tok, segs[0])
            continue
        ftok, a = first[tok.label]
        good = [x for x in segs if float_sign(*((a, x) if ftok.over else (x, a)), table.m) == tok.sign]
        assert len(good) == 1
        pairs.add((a, good[0]))
    return pairs


def test_compile_virtual_trefoil():
    d = petal_from_gauss(parse_gauss(VIRTUAL_TREFOIL))
    assert d.m == 7
    assert d.classical_pairs == {(1, 3), (2, 5)} == _expected_partner(VIRTUAL_TREFOIL)
    assert 7 not in {s for p in d.classical_pairs for s in p}
    assert validate_petal(d) == []


def test_compile_three_crossings():
    d = petal_from_gauss(parse_gauss(THREE_CROSSING))
    assert d.m == 9
    assert d.classical_pairs == {(1, 3), (2, 7), (5, 8)} == _expected_partner(THREE_CROSSING)
    assert d.heights == (1, 4, 2, 7, 5, 8, 3, 6, 9)


def test_compile_empty():
    d = petal_from_gauss(parse_gauss(""))
    assert d == trivial_diagram()
    assert d.heights == (1,)
    assert gauss_from_petal(d).crossings == 0


def test_compile_relabels_input():
    assert petal_from_gauss(parse_gauss("O9+U4+U9+O4+")) == petal_from_gauss(parse_gauss(VIRTUAL_TREFOIL))


def test_roundtrip_examples():
    for text in (VIRTUAL_TREFOIL, THREE_CROSSING):
        assert format_gauss(gauss_from_petal(petal_from_gauss(parse_gauss(text)))) == text


def _check_construction(code):
    d = petal_from_gauss(code)
    assert d.m == petal_bound(code.crossings) and d.m % 2 == 1
    assert validate_petal(d) == []
    if d.m >= 2:
        assert all(len(p) <= 2 for p in to_type(d.central_crossing()).parts)
    assert len(d.classical_pairs) == code.crossings
    # O-marked occurrence sits higher
    first_seg = {}
    table = segment_table(code)
    for tok, segs in zip(table.tokens, table.segments):
        for s in segs:
            first_seg[s] = tok
    for s, t in d.classical_pairs:
        upper, lower = (s, t) if d.height(s) < d.height(t) else (t, s)
        assert first_seg[upper].over and not first_seg[lower].over
    assert gauss_from_petal(d) == code


@pytest.mark.parametrize("n", range(4))
def test_exhaustive_small_codes(n):
    for code in all_canonical_codes(n):
        _check_construction(code)


def test_random_codes_up_to_eight():
    rng = random.Random(20240611)
    for _ in range(300):
        _check_construction(random_gauss_code(rng.randint(0, 8), rng))


@settings(max_examples=200)
@given(st.integers(0, 12), st.randoms(use_true_random=False))
def test_roundtrip_property(n, rng):
    _check_construction(random_gauss_code(n, rng))


# ---- validation and extraction errors


def test_validate_even():
    problems = validate_petal(PetalDiagram(4, (1, 2, 3, 4), frozenset()))
    assert any("odd" in p for p in problems)


def test_validate_forbidden_triple():
    problems = validate_petal(PetalDiagram(3, (1, 2, 3), frozenset({(1, 2), (2, 3)})))
    assert len(problems) == 1 and "forbidden" in problems[0]


def test_validate_heights():
    problems = validate_petal(PetalDiagram(3, (1, 1, 3), frozenset()))
    assert len(problems) == 1 and "permutation" in problems[0]


def test_validate_reports_each_violation():
    problems = validate_petal(PetalDiagram(4, (1, 1, 3, 4), frozenset({(1, 2), (2, 3)})))
    assert len(problems) == 3


def test_extract_rejects_big_class():
    d = PetalDiagram(3, (1, 2, 3), frozenset({(1, 2), (1, 3), (2, 3)}))
    assert validate_petal(d) == []
    with pytest.raises(UnsupportedDiagramError):
        gauss_from_petal(d)


def test_extract_rejects_invalid():
    with pytest.raises(InvalidPetalError):
        gauss_from_petal(PetalDiagram(4, (1, 2, 3, 4), frozenset()))


def test_classical_classes():
    d = petal_from_gauss(parse_gauss(THREE_CROSSING))
    assert classical_classes(d) == [[1, 3], [7, 2], [5, 8]]


# ---- JSON


def test_json_schema():
    d = petal_from_gauss(parse_gauss(VIRTUAL_TREFOIL))
    data = json.loads(d.dumps())
    assert list(data) == ["petals", "heights", "classical_pairs"]
    assert data == {"petals": 7, "heights": [1, 4, 2, 5, 3, 6, 7], "classical_pairs": [[1, 3], [2, 5]]}
    assert PetalDiagram.loads(d.dumps()) == d


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"petals": 3, "heights": [1, 2, 3]}',
        '{"petals": 3, "heights": [1, 2, 3], "classical_pairs": [], "extra": 1}',
        '{"petals": "3", "heights": [1, 2, 3], "classical_pairs": []}',
        '{"petals": 3, "heights": [1, 2, 3.5], "classical_pairs": []}',
        '{"petals": 3, "heights": [1, 2, 3], "classical_pairs": [[1, 2, 3]]}',
        '{"petals": true, "heights": [1], "classical_pairs": []}',
    ],
)
def test_json_errors(text):
    with pytest.raises(PetalFormatError):
        PetalDiagram.loads(text)
