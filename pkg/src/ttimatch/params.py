"""Decoder parameters with defaults matching the production settings."""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class DecoderParams:
    """Tunables of the matching decoders.

    Defaults are the small-decoder settings; the intermediate decoder uses
    `intermediate_defaults()` (more re-matching rounds plus refinement).
    """

    lam: float = 1.0
    r_match: int = 3
    r_refine: int = 2
    w_fixed: int = 6
    f_limit: float = 0.5
    delta_minus: float = -1.0
    delta_plus: float = 1.0
    e_limit: int = 10
    big_penalty: int = 10 ** 6
    node_budget: int = 20000
    bp_max_iters: int = 1000
    bp_scale: float = 1.0
    osd_order: int = 10
    osd_order_cap: int = 10

    def __post_init__(self):
        if self.lam < 0 or self.r_match < 0 or self.r_refine < 0:
            raise ValueError("lam, r_match, r_refine must be nonnegative")
        if self.w_fixed < 0 or self.e_limit < 0 or self.f_limit < 0:
            raise ValueError("w_fixed, e_limit, f_limit must be nonnegative")
        if self.osd_order > self.osd_order_cap:
            raise ValueError(f"osd_order exceeds the cap ({self.osd_order_cap})")


def intermediate_defaults() -> DecoderParams:
    return DecoderParams(r_match=5, r_refine=2)


def params_from_file(path) -> DecoderParams:
    """Read parameters from a JSON or TOML config file.

    Unknown keys are rejected to catch typos. TOML needs either Python 3.11+
    (tomllib) or the `tomli` package.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # Python 3.11+
        except ImportError:  # pragma: no cover
            try:
                import tomli as tomllib
            except ImportError as exc:
                raise RuntimeError(
                    "TOML config requires Python 3.11+ or the tomli package; "
                    "use JSON instead"
                ) from exc
        raw = tomllib.loads(text)
    else:
        raw = json.loads(text)
    section = raw.get("decoder", raw)
    known = {f.name for f in fields(DecoderParams)}
    unknown = set(section) - known
    if unknown:
        raise ValueError(f"unknown decoder parameter(s): {sorted(unknown)}")
    return replace(DecoderParams(), **section)
