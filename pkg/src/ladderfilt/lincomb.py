"""Exact finite linear combinations of canonical codes."""
from __future__ import annotations

from fractions import Fraction


class LinearCombination:
    """Map from canonical codes to nonzero rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                self.add(k, c)

    @classmethod
    def from_signed(cls, pairs):
        """Build from ``(coefficient, SignedCanonical)`` pairs; zero signs drop out."""
        out = cls()
        for c, sc in pairs:
            if sc.sign:
                out.add(sc.code, c * sc.sign)
        return out

    def add(self, key, c):
        c = Fraction(c)
        if not c:
            return
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            del self.terms[key]

    def __add__(self, other):
        out = LinearCombination(self.terms)
        for k, c in other.terms.items():
            out.add(k, c)
        return out

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, s):
        s = Fraction(s)
        if not s:
            return LinearCombination()
        out = LinearCombination()
        out.terms = {k: c * s for k, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        return isinstance(other, LinearCombination) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __repr__(self):
        inner = ", ".join(f"{c}*{k.hex() if isinstance(k, bytes) else k}" for k, c in self)
        return f"LinearCombination({inner})"

    def normalized(self):
        """Scale so the coefficient of the smallest key is 1 (None for zero)."""
        if not self.terms:
            return None
        lead = min(self.terms)
        return self * (1 / self.terms[lead])

    def key(self):
        """Hashable total-order key of the normalized vector."""
        n = self.normalized()
        return tuple(sorted(n.terms.items())) if n is not None else ()
