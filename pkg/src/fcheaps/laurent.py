"""Integer Laurent polynomials in one variable ``v``."""

from __future__ import annotations

import re
from typing import Iterable, Mapping


class LaurentPoly:
    """Sparse ``{exponent: coefficient}``; zero coefficients are never stored."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for e, a in items:
            if a:
                c[e] = c.get(e, 0) + a
                if not c[e]:
                    del c[e]
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, a: int) -> "LaurentPoly":
        return cls._raw({0: a} if a else {})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exponent: coeff} if coeff else {})

    # -- access -------------------------------------------------------------

    def terms(self) -> list[tuple[int, int]]:
        return sorted(self._c.items())

    def __getitem__(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    @property
    def max_degree(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def min_degree(self) -> int | None:
        return min(self._c) if self._c else None

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._c)

    def in_a_minus(self) -> bool:
        """Coefficients only on non-positive powers (the ring Z[v^-1])."""
        return all(e <= 0 for e in self._c)

    def in_v_inverse_a_minus(self) -> bool:
        return all(e < 0 for e in self._c)

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self._c.values())

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            s = c.get(e, 0) + a
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -a for e, a in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({e: a * other for e, a in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + a1 * a2
        return LaurentPoly._raw({e: a for e, a in c.items() if a})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, a), = self._c.items()
            if a not in (1, -1):
                raise ValueError("coefficient is not a unit")
            return LaurentPoly._raw({e * n: a ** (-n % 2)})
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``v**k``."""
        return LaurentPoly._raw({e + k: a for e, a in self._c.items()})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: a for e, a in self._c.items()})

    def exact_quotient(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """``q`` with ``q * other == self`` and integer coefficients, else None."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        top, low = other.max_degree, other.min_degree
        lead = other[top]
        q: dict[int, int] = {}
        r = self
        while r:
            d = r.max_degree
            k = d - top
            if k + low < r.min_degree:
                return None
            a, rem = divmod(r[d], lead)
            if rem:
                return None
            q[k] = a
            r = r - other.shift(k) * a
        return LaurentPoly(q)

    # -- comparison and text -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, a in self.terms():
            mag = abs(a)
            if e == 0:
                body = str(mag)
            else:
                var = "v" if e == 1 else f"v^{e}"
                body = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(body if a > 0 else "-" + body)
            else:
                parts.append(("+ " if a > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*?\s*v(?:\^\(?(-?\d+)\)?)?)?\s*")


def parse_laurent(text: str) -> LaurentPoly:
    """Inverse of ``str``: accepts e.g. ``3v^-2 - v^-1 + 1 + v^2``."""
    text = text.strip()
    if text == "0":
        return LaurentPoly()
    pos = 0
    coeffs: dict[int, int] = {}
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse Laurent polynomial at column {pos + 1}: {text!r}")
        if m.group(1) is None and not first:
            raise ValueError(f"missing sign at column {pos + 1}: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        a = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            e = int(m.group(4)) if m.group(4) is not None else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, 0) + sign * a
        pos = m.end()
        first = False
    return LaurentPoly(coeffs)


V = LaurentPoly.monomial(1)
V_INV = LaurentPoly.monomial(-1)
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()
