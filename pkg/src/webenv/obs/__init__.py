"""Observation compiler: raw DOM snapshots in, compact observations out."""

from webenv.obs.compiler import (
    ATTRIBUTE_WHITELIST,
    EXCLUDED_TAGS,
    CompiledObservation,
    assign_semantic_ids,
    capture_input_state,
    compile_observation,
    compile_observation_detailed,
    detect_clickable,
    detect_hoverable,
    filter_attributes,
    filter_node,
    prune_and_flatten,
    slugify,
)
from webenv.obs.serialize import (
    MINIMAL_DOCUMENT,
    parse_plain_html,
    parse_stripped_html,
    serialize_raw_html,
    serialize_stripped,
)
from webenv.obs.types import (
    Box,
    ClickableEntry,
    InputStateRecord,
    MalformedSnapshot,
    ObservationDocument,
    OptionRecord,
    RawDomSnapshot,
    RawNode,
    SelectStateRecord,
    StrippedNode,
)

__all__ = [
    "ATTRIBUTE_WHITELIST",
    "EXCLUDED_TAGS",
    "MINIMAL_DOCUMENT",
    "Box",
    "CompiledObservation",
    "ClickableEntry",
    "InputStateRecord",
    "MalformedSnapshot",
    "ObservationDocument",
    "OptionRecord",
    "RawDomSnapshot",
    "RawNode",
    "SelectStateRecord",
    "StrippedNode",
    "assign_semantic_ids",
    "capture_input_state",
    "compile_observation",
    "compile_observation_detailed",
    "detect_clickable",
    "detect_hoverable",
    "filter_attributes",
    "filter_node",
    "parse_plain_html",
    "parse_stripped_html",
    "prune_and_flatten",
    "serialize_raw_html",
    "serialize_stripped",
    "slugify",
]
