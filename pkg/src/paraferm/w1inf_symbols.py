"""Graded symbol algebra with one generator J^m in each weight m+1.

Products are taken at the level of the associated graded of the standard
decreasing filtration, where the r-th product collapses to a single term

    J^m_r J^n = ([n]_r - (-1)^r [m]_r) J^(m+n-r),

with [n]_a = n(n-1)...(n-a+1) the falling factorial.  The central term of
the underlying operator product lands in the coefficient field and plays no
role in generation questions, so it is dropped here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadMode


def falling_factorial(n: int, a: int) -> int:
    """[n]_a = n(n-1)...(n-a+1); [n]_0 = 1."""
    if a < 0:
        raise ValueError("a must be non-negative")
    out = 1
    for t in range(a):
        out *= n - t
    return out


class SymbolElement:
    """Finite rational linear combination of the symbols J^m, m >= 0."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict[int, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for m, c in items:
            c = Fraction(c)
            if not c:
                continue
            if m < 0:
                raise ValueError("symbol index must be non-negative")
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        self.terms = acc

    def __eq__(self, other):
        if not isinstance(other, SymbolElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other: "SymbolElement") -> "SymbolElement":
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return SymbolElement(acc)

    def scale(self, c) -> "SymbolElement":
        c = Fraction(c)
        return SymbolElement({m: c * v for m, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*J^{m}" for m, c in sorted(self.terms.items()))


def symbol_product_coefficient(m: int, r: int, n: int) -> int:
    """Coefficient of J^(m+n-r) in the r-th product of J^m with J^n."""
    return falling_factorial(n, r) - (-1) ** r * falling_factorial(m, r)


def symbol_product(m: int, r: int, n: int) -> SymbolElement:
    """r-th product J^m_r J^n at symbol level: a single term (or zero)."""
    if m < 0 or n < 0 or r < 0:
        raise BadMode("indices must be non-negative")
    if r > m + n:
        raise BadMode(f"mode r={r} exceeds m+n={m + n}")
    return SymbolElement({m + n - r: symbol_product_coefficient(m, r, n)})


def generation_closure(seeds, bound: int) -> set[int]:
    """Indices m <= bound reachable from the seeds by iterated products with
    nonzero coefficient (seeds included)."""
    if bound < max(seeds, default=0):
        raise ValueError("bound must be at least max(seeds)")
    reached = {m for m in seeds if 0 <= m <= bound}
    frontier = set(reached)
    while frontier:
        new = set()
        for m in frontier:
            for n in reached:
                for a, b in ((m, n), (n, m)):
                    for r in range(0, a + b + 1):
                        t = a + b - r
                        if t > bound or t in reached or t in new:
                            continue
                        if symbol_product_coefficient(a, r, b):
                            new.add(t)
        reached |= new
        frontier = new
    return reached


def derivation_chains(seeds, bound: int) -> dict[int, tuple[int, int, int]]:
    """One witness product (m, r, n) per reachable non-seed index."""
    seeds = set(seeds)
    reached = set(seeds)
    witness: dict[int, tuple[int, int, int]] = {}
    frontier = set(seeds)
    while frontier:
        new = set()
        for m in frontier:
            for n in sorted(reached):
                for a, b in ((m, n), (n, m)):
                    for r in range(0, a + b + 1):
                        t = a + b - r
                        if t > bound or t in reached or t in new:
                            continue
                        if symbol_product_coefficient(a, r, b):
                            new.add(t)
                            witness[t] = (a, r, b)
        reached |= new
        frontier = new
    return witness
