"""Triple (a, q, t) gradings.

A degree is a triple of integers (a_exp, q_exp, t2_exp).  The t-exponent is
stored doubled so that half-integer homological shifts stay in integer
arithmetic; the actual t-degree is t2_exp / 2.  Everything downstream
(polynomials, shift degrees of exact-sequence maps, differential degrees)
reuses this one type.
"""

from __future__ import annotations

from typing import NamedTuple


class TriDegree(NamedTuple):
    a: int
    q: int
    t2: int  # doubled t-exponent

    def __add__(self, other):  # type: ignore[override]
        return TriDegree(self.a + other.a, self.q + other.q, self.t2 + other.t2)

    def __neg__(self):
        return TriDegree(-self.a, -self.q, -self.t2)

    def __sub__(self, other):
        return TriDegree(self.a - other.a, self.q - other.q, self.t2 - other.t2)

    def scale(self, k: int) -> "TriDegree":
        return TriDegree(k * self.a, k * self.q, k * self.t2)

    def sort_key(self):
        """Canonical term order: lexicographic on (t2, a, q)."""
        return (self.t2, self.a, self.q)

    def proj(self, n: int) -> tuple[int, int]:
        """sl(n)-projected bidegree (n*a + q, t2), i.e. a replaced by q^n."""
        return (n * self.a + self.q, self.t2)


ZERO_DEG = TriDegree(0, 0, 0)


def deg(a: int = 0, q: int = 0, t2: int = 0) -> TriDegree:
    return TriDegree(a, q, t2)


def fmt_exponent(num: int, den: int = 1) -> str:
    """Render an exponent, halves as k/2."""
    if den == 1 or num % den == 0:
        return str(num // den)
    return f"{num}/{den}"


def fmt_monomial(d: TriDegree) -> str:
    """Render a monomial a^i q^j t^{t2/2}; the unit monomial renders as '1'."""
    parts = []
    for sym, e, den in (("a", d.a, 1), ("q", d.q, 1), ("t", d.t2, 2)):
        if e == 0:
            continue
        if e == den:
            parts.append(sym)
        else:
            parts.append(f"{sym}^{fmt_exponent(e, den)}")
    return "".join(parts) if parts else "1"
