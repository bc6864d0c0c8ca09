"""Exact truncated power series in q with rational exponents.

A :class:`QSeries` stores a finite sparse map exponent -> coefficient with
both entries exact rationals, together with a hard truncation T: every
stored exponent is < T, and arithmetic never pretends to know more.  The
truncation of a sum or product is the minimum of the operand truncations.

The module also provides the standard character building blocks: the
Heisenberg (free boson) character, the theta series of a rescaled rank-one
coset, their product (the character of a lattice coset module), and the
character of a vertex algebra freely generated by one field in each weight
2..k.

:class:`ZQSeries` is the two-variable variant graded by an integer charge
exponent in z and a rational conformal weight in q; it carries the
two-variable affine characters.

No floating point is used anywhere; exponent and coefficient arithmetic is
exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, isqrt, lcm

from .errors import BadResidue, ZeroConstantTerm


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class QSeries:
    """Truncated formal series sum c_e q^e with exact rational e and c_e.

    Invariants: no stored coefficient is zero and every stored exponent is
    strictly below ``truncation``.
    """

    __slots__ = ("terms", "truncation")

    def __init__(self, terms, truncation):
        T = _rat(truncation)
        acc: dict[Fraction, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for e, c in items:
            e = _rat(e)
            if e >= T:
                continue
            c = _rat(c)
            if not c:
                continue
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        self.terms = acc
        self.truncation = T

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, truncation) -> "QSeries":
        return cls({}, truncation)

    @classmethod
    def one(cls, truncation) -> "QSeries":
        return cls({Fraction(0): Fraction(1)}, truncation)

    @classmethod
    def monomial(cls, exponent, coefficient, truncation) -> "QSeries":
        return cls({_rat(exponent): _rat(coefficient)}, truncation)

    # -- basic queries ----------------------------------------------------

    def coefficient(self, exponent) -> Fraction:
        return self.terms.get(_rat(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def leading(self):
        """(exponent, coefficient) of the lowest term, or None if zero."""
        if not self.terms:
            return None
        e = min(self.terms)
        return e, self.terms[e]

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.terms == other.terms

    def __hash__(self):
        return hash((self.truncation, tuple(sorted(self.terms.items()))))

    def agrees_with(self, other: "QSeries") -> bool:
        """Termwise equality below the smaller of the two truncations."""
        T = min(self.truncation, other.truncation)
        a = {e: c for e, c in self.terms.items() if e < T}
        b = {e: c for e, c in other.terms.items() if e < T}
        return a == b

    def first_disagreement(self, other: "QSeries"):
        """Smallest exponent where the two series differ, or None."""
        T = min(self.truncation, other.truncation)
        exps = {e for e in self.terms if e < T} | {e for e in other.terms if e < T}
        bad = [e for e in exps if self.coefficient(e) != other.coefficient(e)]
        return min(bad) if bad else None

    def __repr__(self):
        body = " + ".join(
            f"{c}*q^({e})" for e, c in sorted(self.terms.items())[:6]
        )
        more = " + ..." if len(self.terms) > 6 else ""
        return f"QSeries({body or '0'}{more}; T={self.truncation})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        T = min(self.truncation, other.truncation)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return QSeries(acc, T)

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self.terms.items()}, self.truncation)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other: "QSeries") -> "QSeries":
        T = min(self.truncation, other.truncation)
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < T:
                    acc[e] = acc.get(e, 0) + c1 * c2
        return QSeries(acc, T)

    def scale(self, c) -> "QSeries":
        c = _rat(c)
        return QSeries({e: c * v for e, v in self.terms.items()}, self.truncation)

    def shift(self, delta) -> "QSeries":
        """Multiply by q^delta: exponents and truncation move together."""
        d = _rat(delta)
        return QSeries(
            {e + d: c for e, c in self.terms.items()}, self.truncation + d
        )

    def truncate(self, truncation) -> "QSeries":
        T = min(self.truncation, _rat(truncation))
        return QSeries(self.terms, T)

    def inverse(self) -> "QSeries":
        """Inverse of a series with nonzero constant term, up to truncation.

        All exponents of one series lie on a grid (1/D)Z; the inverse is
        solved term by term on that grid.
        """
        a0 = self.terms.get(Fraction(0))
        if not a0:
            raise ZeroConstantTerm("cannot invert a series with zero constant term")
        D = 1
        for e in self.terms:
            D = lcm(D, e.denominator)
        D = lcm(D, self.truncation.denominator)
        # support of the positive-exponent part, in grid units
        supp = sorted(
            (int(e * D), c) for e, c in self.terms.items() if e > 0
        )
        n_grid = int(self.truncation * D)
        if self.truncation * D > n_grid:
            n_grid += 1
        inv = {0: 1 / a0}
        for i in range(1, n_grid):
            s = Fraction(0)
            for ia, ca in supp:
                if ia > i:
                    break
                prev = inv.get(i - ia)
                if prev is not None:
                    s += ca * prev
            if s:
                inv[i] = -s / a0
        return QSeries(
            {Fraction(i, D): c for i, c in inv.items()}, self.truncation
        )

    def divide(self, other: "QSeries") -> "QSeries":
        """Exact quotient self/other.

        The divisor may have a nonzero leading term at any exponent e0; the
        result is reliable below min(self.T, other.T) - e0.
        """
        lead = other.leading()
        if lead is None:
            raise ZeroConstantTerm("division by the zero series")
        e0, _ = lead
        return self.shift(-e0) * other.shift(-e0).inverse()

    # -- serialization -----------------------------------------------------

    def to_obj(self) -> dict:
        """Canonical JSON-ready form; round-trips bit-exactly."""
        return {
            "truncation": [self.truncation.numerator, self.truncation.denominator],
            "terms": [
                [e.numerator, e.denominator, str(c)]
                for e, c in sorted(self.terms.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_obj(cls, obj: dict) -> "QSeries":
        T = Fraction(obj["truncation"][0], obj["truncation"][1])
        return cls(
            {Fraction(n, d): Fraction(c) for n, d, c in obj["terms"]}, T
        )

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_obj(json.loads(text))


# -- operation aliases matching the public contract --------------------------


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def qs_inv_unit(a: QSeries) -> QSeries:
    return a.inverse()


# -- character building blocks ----------------------------------------------


def _geometric_inverse_factor(exponent: Fraction, power: int, T: Fraction) -> QSeries:
    """(1 - q^exponent)^(-power) truncated at T, exponent > 0, power >= 0."""
    terms = {}
    j = 0
    while j * exponent < T:
        terms[j * exponent] = comb(j + power - 1, power - 1) if power else (j == 0)
        j += 1
    return QSeries(terms, T)


def heisenberg_char(rank: int, T) -> QSeries:
    """Character prod_{n>=1} (1-q^n)^(-rank): rank-colored partition counts."""
    if rank < 0:
        raise ValueError("rank must be a non-negative integer")
    T = _rat(T)
    out = QSeries.one(T)
    n = 1
    while n < T:
        out = out * _geometric_inverse_factor(Fraction(n), rank, T)
        n += 1
    return out


def coset_theta(k: int, s: int, T) -> QSeries:
    """Theta series sum_{n in Z} q^((2kn+s)^2/4k) of the coset (s/2k)-shifted
    rank-one lattice of norm 2k, truncated at T."""
    if k < 1:
        raise ValueError("level k must be a positive integer")
    if not 0 <= s < 2 * k:
        raise BadResidue(f"residue s={s} out of range 0..{2 * k - 1}")
    T = _rat(T)
    terms: dict[Fraction, Fraction] = {}
    # |2kn+s| < sqrt(4kT)
    bound = isqrt(int(4 * k * T)) + 2 * k + 1
    n = -(bound // (2 * k)) - 1
    while 2 * k * n + s <= bound:
        m = 2 * k * n + s
        e = Fraction(m * m, 4 * k)
        if e < T:
            terms[e] = terms.get(e, 0) + 1
        n += 1
    return QSeries(terms, T)


def lattice_coset_char(k: int, s: int, T) -> QSeries:
    """Graded dimensions of the coset module: theta series times the rank-one
    Heisenberg character."""
    return coset_theta(k, s, T) * heisenberg_char(1, T)


def free_w_char(k: int, T) -> QSeries:
    """Character of a vertex algebra freely generated by one field in each
    weight 2, 3, ..., k: prod_{m=2}^{k} prod_{n>=0} (1-q^(m+n))^(-1).

    Expansion begins 1 + q^2 + 2 q^3 for every k >= 3.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    T = _rat(T)
    out = QSeries.one(T)
    d = 2
    while d < T:
        out = out * _geometric_inverse_factor(Fraction(d), min(d, k) - 1, T)
        d += 1
    return out


# -- two-variable series ------------------------------------------------------


class ZQSeries:
    """Series in z (integer exponents) and q (rational exponents < truncation).

    Used for characters graded by (charge, conformal weight); per q-power the
    z-support is finite.
    """

    __slots__ = ("terms", "truncation")

    def __init__(self, terms, truncation):
        T = _rat(truncation)
        acc: dict[tuple[int, Fraction], Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for (z, e), c in items:
            e = _rat(e)
            if e >= T:
                continue
            c = _rat(c)
            if not c:
                continue
            key = (int(z), e)
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        self.terms = acc
        self.truncation = T

    @classmethod
    def zero(cls, truncation) -> "ZQSeries":
        return cls({}, truncation)

    @classmethod
    def one(cls, truncation) -> "ZQSeries":
        return cls({(0, Fraction(0)): Fraction(1)}, truncation)

    def coefficient(self, z: int, e) -> Fraction:
        return self.terms.get((z, _rat(e)), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, ZQSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.terms == other.terms

    def __hash__(self):
        return hash((self.truncation, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "ZQSeries") -> "ZQSeries":
        T = min(self.truncation, other.truncation)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            acc[key] = acc.get(key, 0) + c
        return ZQSeries(acc, T)

    def __mul__(self, other: "ZQSeries") -> "ZQSeries":
        T = min(self.truncation, other.truncation)
        acc: dict[tuple[int, Fraction], Fraction] = {}
        for (z1, e1), c1 in self.terms.items():
            for (z2, e2), c2 in other.terms.items():
                e = e1 + e2
                if e < T:
                    key = (z1 + z2, e)
                    acc[key] = acc.get(key, 0) + c1 * c2
        return ZQSeries(acc, T)

    def mul_geometric_inverse(self, zexp: int, qexp) -> "ZQSeries":
        """Multiply by (1 - z^zexp q^qexp)^(-1) with qexp > 0."""
        qexp = _rat(qexp)
        if qexp <= 0:
            raise ValueError("geometric factor needs positive q-exponent")
        out = dict(self.terms)
        T = self.truncation
        # process source terms in increasing q-order so new terms cascade
        frontier = sorted(self.terms.items(), key=lambda kv: kv[0][1])
        while frontier:
            nxt = []
            for (z, e), c in frontier:
                e2 = e + qexp
                if e2 >= T:
                    continue
                key = (z + zexp, e2)
                out[key] = out.get(key, 0) + c
                nxt.append((key, c))
            frontier = nxt
        return ZQSeries(out, T)

    def shift_q(self, delta) -> "ZQSeries":
        d = _rat(delta)
        return ZQSeries(
            {(z, e + d): c for (z, e), c in self.terms.items()},
            self.truncation + d,
        )

    def specialize_z1(self) -> QSeries:
        """Forget the charge grading: sum over all z-powers."""
        acc: dict[Fraction, Fraction] = {}
        for (_, e), c in self.terms.items():
            acc[e] = acc.get(e, 0) + c
        return QSeries(acc, self.truncation)

    def charge_slice_sum(self, residue: int, modulus: int) -> QSeries:
        """Sum of the z^m slices over all m congruent to residue mod modulus."""
        acc: dict[Fraction, Fraction] = {}
        for (z, e), c in self.terms.items():
            if (z - residue) % modulus == 0:
                acc[e] = acc.get(e, 0) + c
        return QSeries(acc, self.truncation)

    def q_slice(self, e) -> dict[int, Fraction]:
        """z-polynomial at a fixed q-exponent."""
        e = _rat(e)
        return {z: c for (z, ee), c in self.terms.items() if ee == e}

    def __repr__(self):
        return f"ZQSeries({len(self.terms)} terms; T={self.truncation})"
