"""Bivariate Laurent monomials and polynomials on an l x m torus.

Exponents are always stored reduced mod (l, m). Polynomial coefficients live
in GF(2): addition is symmetric difference of term sets. Construction from a
raw term list deduplicates terms that collide after exponent reduction (a
term list is treated as a set of stencil sites, not a formal sum).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .gf2 import BitMatrix


@dataclass(frozen=True, order=True)
class Monomial:
    """x^i y^j with 0 <= i < l, 0 <= j < m."""

    i: int
    j: int

    def reduced(self, ell: int, m: int) -> "Monomial":
        return Monomial(self.i % ell, self.j % m)


@dataclass(frozen=True)
class LaurentPoly:
    """Set of monomials over GF(2) on a fixed (l, m) torus."""

    terms: frozenset[Monomial]
    ell: int
    m: int

    def __post_init__(self):
        for t in self.terms:
            if not (0 <= t.i < self.ell and 0 <= t.j < self.m):
                raise ValueError(f"unreduced term {t} for lattice ({self.ell}, {self.m})")

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], ell: int, m: int) -> "LaurentPoly":
        # Set semantics: terms that coincide after reduction collapse to one.
        reduced = {Monomial(i % ell, j % m) for (i, j) in terms}
        return cls(frozenset(reduced), ell, m)

    @property
    def lattice(self) -> tuple[int, int]:
        return (self.ell, self.m)

    def _check_same_lattice(self, other: "LaurentPoly"):
        if self.lattice != other.lattice:
            raise ValueError(f"lattice mismatch: {self.lattice} vs {other.lattice}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_same_lattice(other)
        return LaurentPoly(self.terms ^ other.terms, self.ell, self.m)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_same_lattice(other)
        acc: set[Monomial] = set()
        for s in self.terms:
            for t in other.terms:
                u = Monomial((s.i + t.i) % self.ell, (s.j + t.j) % self.m)
                if u in acc:
                    acc.remove(u)
                else:
                    acc.add(u)
        return LaurentPoly(frozenset(acc), self.ell, self.m)

    def antipode(self) -> "LaurentPoly":
        """f*(x, y) = f(x^-1, y^-1), exponents reduced back onto the torus."""
        return LaurentPoly(
            frozenset(Monomial(-t.i % self.ell, -t.j % self.m) for t in self.terms),
            self.ell,
            self.m,
        )

    def translated(self, di: int, dj: int) -> "LaurentPoly":
        return LaurentPoly(
            frozenset(Monomial((t.i + di) % self.ell, (t.j + dj) % self.m) for t in self.terms),
            self.ell,
            self.m,
        )

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms, key=lambda t: (t.j, t.i))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in self.sorted_terms():
            if t.i == 0 and t.j == 0:
                parts.append("1")
                continue
            p = ""
            if t.i:
                p += "x" + (f"^{t.i}" if t.i > 1 else "")
            if t.j:
                p += "y" + (f"^{t.j}" if t.j > 1 else "")
            parts.append(p)
        return " + ".join(parts)


def site_index(i: int, j: int, ell: int) -> int:
    """Canonical ordering of lattice sites: i + l*j."""
    return i + ell * j


def poly_to_matrix(p: LaurentPoly) -> BitMatrix:
    """Matrix of the multiplication-by-p map on the monomial basis.

    Basis ordered by site_index; the result is the XOR of one cyclic
    permutation matrix per term, so it is linear in p.
    """
    ell, m = p.ell, p.m
    n = ell * m
    rows = [0] * n
    for t in p.terms:
        for j in range(m):
            rj = ((j + t.j) % m) * ell
            for i in range(ell):
                rows[((i + t.i) % ell) + rj] ^= 1 << (i + ell * j)
    return BitMatrix(n, n, tuple(rows))
