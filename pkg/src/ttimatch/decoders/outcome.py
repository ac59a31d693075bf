"""Decoder result type shared by all decoders."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..gf2 import BitVector


@dataclass
class DecodeOutcome:
    """Proposed correction or an explicit failure, plus diagnostics.

    A non-failed outcome always satisfies syndrome(correction) == observed
    syndrome; decoders assert this before returning.
    """

    correction: Optional[BitVector]
    failed: bool = False
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def failure(cls, **diag) -> "DecodeOutcome":
        return cls(correction=None, failed=True, diagnostics=diag)
