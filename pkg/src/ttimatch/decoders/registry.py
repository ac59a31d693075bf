"""Name-based decoder construction shared by the CLI and the Monte Carlo
harness. A constructed decoder is a callable syndrome -> DecodeOutcome.
"""
from __future__ import annotations

from typing import Callable, Optional

from ..code import CssCode
from ..coker import CokerBasisData, get_basis_data
from ..gf2 import BitVector
from ..matching import compute_move_set
from ..params import DecoderParams, intermediate_defaults
from .bp import BpDecoder, decode_bposd, osd_postprocess
from .cellmatch import build_cell_decoder
from .intermediate import decode_intermediate
from .outcome import DecodeOutcome
from .small import decode_small

DECODER_NAMES = ("cell", "small", "intermediate", "bp", "bposd")


def make_decoder(
    name: str,
    code: CssCode,
    params: Optional[DecoderParams] = None,
    p: float = 0.05,
    cache_dir=None,
    data: Optional[CokerBasisData] = None,
) -> Callable[[BitVector], DecodeOutcome]:
    """Build a decoding callable.

    `p` is the channel prior used by the BP-based decoders. Matching decoders
    load (or build) the cached excitation-class data.
    """
    if name == "cell":
        dec = build_cell_decoder(code)
        return dec.decode
    if name == "bp":
        params = params or DecoderParams()
        bp = BpDecoder(code, p, params.bp_max_iters, params.bp_scale)
        return bp.decode
    if name == "bposd":
        params = params or DecoderParams()

        def _bposd(s_obs: BitVector) -> DecodeOutcome:
            return decode_bposd(code, s_obs, p, params.bp_max_iters,
                                params.osd_order, params.bp_scale)

        return _bposd
    if name in ("small", "intermediate"):
        if data is None:
            data = get_basis_data(code, cache_dir=cache_dir)
        move_set = compute_move_set(code)
        if name == "small":
            params = params or DecoderParams()

            def _small(s_obs: BitVector) -> DecodeOutcome:
                return decode_small(code, data, s_obs, params, move_set)

            return _small
        params = params or intermediate_defaults()

        def _intermediate(s_obs: BitVector) -> DecodeOutcome:
            return decode_intermediate(code, data, s_obs, params, move_set)

        return _intermediate
    raise KeyError(f"unknown decoder {name!r}; choose from {DECODER_NAMES}")
