"""Named code catalog.

The catalog JSON lists the production bivariate-bicycle codes with their
published (n, k, d), the coarse-graining parameter, and the excitation-class
basis (canonical syndrome patterns with translation scales), plus toric and
hexagonal color codes. Parametric names `toric-<L>` and `color-<L>` are also
accepted for sizes not listed explicitly.

Color-code sizing: `color-L` is the hexagonal (6.6.6) code on a 3L x 3L
torus, so the coarse cell lattice has linear size L. The polynomial pair
requires both lattice dimensions divisible by 3 for the three check classes
to be globally consistent.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .code import CssCode, build_bb_code
from .poly import LaurentPoly


@dataclass(frozen=True)
class BasisEntry:
    pattern: tuple[tuple[int, int], ...]
    scale: int


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    ell: int
    m: int
    a_terms: tuple[tuple[int, int], ...]
    b_terms: tuple[tuple[int, int], ...]
    n: int
    k: int
    d: Optional[int]
    coarse_b: int
    basis: Optional[tuple[BasisEntry, ...]] = None
    transfer_cell: Optional[tuple[int, int]] = None
    template: Optional[str] = None

    def build(self) -> CssCode:
        a = LaurentPoly.from_terms(self.a_terms, self.ell, self.m)
        b = LaurentPoly.from_terms(self.b_terms, self.ell, self.m)
        code = build_bb_code(a, b, self.ell, self.m, name=self.name,
                             distance=self.d, coarse_b=self.coarse_b)
        if code.n != self.n or code.k != self.k:
            raise ValueError(
                f"catalog mismatch for {self.name}: built (n={code.n}, k={code.k}), "
                f"recorded (n={self.n}, k={self.k})"
            )
        return code


def _toric_entry(L: int, n=None, k=None, d=None) -> CatalogEntry:
    return CatalogEntry(
        name=f"toric-{L}", ell=L, m=L,
        a_terms=((0, 0), (1, 0)), b_terms=((0, 0), (0, 1)),
        n=n or 2 * L * L, k=k or 2, d=d or L, coarse_b=1,
        basis=(BasisEntry(((0, 0),), 1),),
        transfer_cell=(1, 1), template="toric",
    )


def _color_entry(L: int, n=None, k=None) -> CatalogEntry:
    ell = 3 * L
    return CatalogEntry(
        name=f"color-{L}", ell=ell, m=ell,
        a_terms=((0, 0), (1, 0), (1, 1)), b_terms=((0, 0), (0, 1), (1, 1)),
        n=n or 2 * ell * ell, k=k or 4, d=None, coarse_b=3,
        basis=(BasisEntry(((1, 0),), 3), BasisEntry(((2, 0),), 3)),
        transfer_cell=None, template="color",
    )


def _load_raw() -> dict:
    with resources.files("ttimatch.data").joinpath("codes.json").open() as f:
        return json.load(f)


def _entry_from_json(rec: dict) -> CatalogEntry:
    template = rec.get("template")
    if template == "toric":
        return _toric_entry(rec["size"], rec.get("n"), rec.get("k"), rec.get("d"))
    if template == "color":
        return _color_entry(rec["size"], rec.get("n"), rec.get("k"))
    basis = None
    if "basis" in rec:
        basis = tuple(
            BasisEntry(tuple(tuple(t) for t in b["pattern"]), b["scale"])
            for b in rec["basis"]
        )
    cell = tuple(rec["transfer_cell"]) if "transfer_cell" in rec else None
    return CatalogEntry(
        name=rec["name"], ell=rec["ell"], m=rec["m"],
        a_terms=tuple(tuple(t) for t in rec["a"]),
        b_terms=tuple(tuple(t) for t in rec["b"]),
        n=rec["n"], k=rec["k"], d=rec.get("d"),
        coarse_b=rec["coarse_b"], basis=basis, transfer_cell=cell,
    )


def catalog_entries() -> dict[str, CatalogEntry]:
    raw = _load_raw()
    return {rec["name"]: _entry_from_json(rec) for rec in raw["codes"]}


def get_entry(name: str) -> CatalogEntry:
    entries = catalog_entries()
    if name in entries:
        return entries[name]
    m = re.fullmatch(r"toric-(\d+)", name)
    if m and int(m.group(1)) >= 2:
        return _toric_entry(int(m.group(1)))
    m = re.fullmatch(r"color-(\d+)", name)
    if m and int(m.group(1)) >= 2:
        return _color_entry(int(m.group(1)))
    raise KeyError(f"unknown code {name!r}; known: {sorted(entries)} or toric-L / color-L")


def get_code(name: str) -> CssCode:
    return get_entry(name).build()


def code_names() -> list[str]:
    return sorted(catalog_entries())


def spec_hash(code: CssCode) -> str:
    """Content hash of the generating data, used for cache invalidation."""
    payload = {
        "ell": code.ell,
        "m": code.m,
        "a": sorted((t.i, t.j) for t in code.a.terms),
        "b": sorted((t.i, t.j) for t in code.b.terms),
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
