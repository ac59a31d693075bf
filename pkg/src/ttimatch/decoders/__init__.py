"""The decoders: cell matching (toric/color), small- and intermediate-size
matching, belief propagation, and BP with ordered-statistics post-processing.
"""
from .outcome import DecodeOutcome
from .cellmatch import (
    CellMatchingDecoder,
    FlushTable,
    build_cell_decoder,
    build_color_flush_table,
    decode_cell_matching,
)
from .small import decode_small
from .intermediate import decode_intermediate
from .bp import BpDecoder, decode_bp, decode_bposd, osd_postprocess
from .registry import DECODER_NAMES, make_decoder

__all__ = [
    "DecodeOutcome",
    "CellMatchingDecoder",
    "FlushTable",
    "build_cell_decoder",
    "build_color_flush_table",
    "decode_cell_matching",
    "decode_small",
    "decode_intermediate",
    "BpDecoder",
    "decode_bp",
    "decode_bposd",
    "osd_postprocess",
    "DECODER_NAMES",
    "make_decoder",
]
