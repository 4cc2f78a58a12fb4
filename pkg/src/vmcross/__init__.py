"""Virtual multicrossings, exact counts of their types, and petal diagrams."""

from .crossing import (
    CrossingType,
    CrossingVerdict,
    MulticrossingSpec,
    PairCrossing,
    TripleType,
    almost_virtual_distance,
    canonical_type,
    classify_triple,
    format_crossing_notation,
    is_almost_virtual,
    parse_crossing_notation,
    reflect_type,
    resolve,
    rotate_type,
    to_type,
    validate_crossing,
)
from .counting import (
    CountReport,
    almost_virtual_count,
    bell,
    count_report,
    enumerate_types,
    fix_count,
    fragmented_count,
    fragmented_count_by_parts,
    v_estimate,
    vcount,
    vcount_prime,
)
from .gauss import SignedGaussCode, Token, canonicalize_gauss, format_gauss, parse_gauss
from .petal import (
    PetalDiagram,
    SegmentTable,
    crossing_sign,
    direction_index,
    gauss_from_petal,
    petal_bound,
    petal_from_gauss,
    segment_table,
    validate_petal,
)
from .render import RenderOptions, render_crossing_svg, render_petal_svg

__all__ = [
    "CountReport",
    "CrossingType",
    "CrossingVerdict",
    "MulticrossingSpec",
    "PairCrossing",
    "PetalDiagram",
    "RenderOptions",
    "SegmentTable",
    "SignedGaussCode",
    "Token",
    "TripleType",
    "almost_virtual_count",
    "almost_virtual_distance",
    "bell",
    "canonical_type",
    "canonicalize_gauss",
    "classify_triple",
    "count_report",
    "crossing_sign",
    "direction_index",
    "enumerate_types",
    "fix_count",
    "format_crossing_notation",
    "format_gauss",
    "fragmented_count",
    "fragmented_count_by_parts",
    "gauss_from_petal",
    "is_almost_virtual",
    "parse_crossing_notation",
    "parse_gauss",
    "petal_bound",
    "petal_from_gauss",
    "reflect_type",
    "render_crossing_svg",
    "render_petal_svg",
    "resolve",
    "rotate_type",
    "segment_table",
    "to_type",
    "v_estimate",
    "validate_crossing",
    "validate_petal",
    "vcount",
    "vcount_prime",
]

__version__ = "0.1.0"
