"""N-parametric Poincare polynomials built from quantum-integer brackets.

A FamilyPoincare is a multiset of terms (monomial, optional [N+c] bracket).
The bracket [m] is the quantum integer q^(m-1) + q^(m-3) + ... + q^(1-m);
a term  mono*[N+c]  evaluates, for an integer N with N+c >= 0, to the string
of monomials mono*q^j for j = N+c-1, N+c-3, ..., 1-N-c.  [0] evaluates to
zero, which is how bracket terms vanish at small N.

The canonical a-names of a string's endpoints replace one q^N by a: the top
of mono*[N+c] is (a+1, q+c-1) and the bottom is (a-1, q-c+1) relative to
mono.  These names drive the kernel/cokernel bookkeeping in the string
module layer.

This module also owns the text grammar:

    poly   := term ('+' term)* | '0' | nothing
    term   := [mult] [bracket] factor*
    bracket:= '[' 'N' (('+'|'-') int)? ']'
    factor := ('a'|'q'|'t') ['^' exponent]     (t exponents may be k or k/2)

Whitespace is insignificant.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import BracketEval, BracketProduct, PolynomialSyntax
from .grading import TriDegree, fmt_exponent, fmt_monomial
from .poly import Poincare

# A family term key: (monomial, bracket offset c or None for a plain term).
TermKey = Tuple[TriDegree, Optional[int]]


def bracket_monomials(m: int) -> list[int]:
    """q-exponents of the quantum integer [m], m >= 0."""
    if m < 0:
        raise BracketEval(f"quantum bracket [{m}] with negative index")
    return list(range(m - 1, -m - 1, -2))


class FamilyPoincare:
    """Immutable N-parametric Poincare polynomial."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[TermKey, int] | Iterable[Tuple[TermKey, int]] = ()):
        data: Dict[TermKey, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, mult in items:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                data[key] = data.get(key, 0) + mult
        self._terms = data

    @classmethod
    def from_poincare(cls, p: Poincare) -> "FamilyPoincare":
        return cls({(mono, None): mult for mono, mult in p.items()})

    @classmethod
    def zero(cls) -> "FamilyPoincare":
        return cls()

    def items(self) -> Iterator[Tuple[TermKey, int]]:
        return iter(sorted(self._terms.items(), key=_term_sort_key))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FamilyPoincare) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "FamilyPoincare") -> "FamilyPoincare":
        data = dict(self._terms)
        for key, mult in other._terms.items():
            data[key] = data.get(key, 0) + mult
        return FamilyPoincare(data)

    def __mul__(self, other: "FamilyPoincare") -> "FamilyPoincare":
        data: Dict[TermKey, int] = {}
        for (m1, c1), n1 in self._terms.items():
            for (m2, c2), n2 in other._terms.items():
                if c1 is not None and c2 is not None:
                    raise BracketProduct("product of two bracket-carrying terms")
                key = (m1 + m2, c1 if c1 is not None else c2)
                data[key] = data.get(key, 0) + n1 * n2
        return FamilyPoincare(data)

    def shift(self, d: TriDegree) -> "FamilyPoincare":
        return FamilyPoincare({(m + d, c): n for (m, c), n in self._terms.items()})

    def psi_dual(self) -> "FamilyPoincare":
        """Degree negation; brackets are self-dual as q-symmetric strings."""
        return FamilyPoincare({(-m, c): n for (m, c), n in self._terms.items()})

    @property
    def has_brackets(self) -> bool:
        return any(c is not None for (_, c) in self._terms)

    @property
    def plain_part(self) -> Poincare:
        return Poincare({m: n for (m, c), n in self._terms.items() if c is None})

    def bracket_terms(self) -> Iterator[Tuple[TriDegree, int, int]]:
        """Yield (monomial, offset c, multiplicity) for bracket terms."""
        for (m, c), n in self.items():
            if c is not None:
                yield m, c, n

    def evaluate(self, n: int) -> Poincare:
        """Concrete Poincare at integer N = n; every bracket needs n+c >= 0."""
        data: Dict[TriDegree, int] = {}
        for (m, c), mult in self._terms.items():
            if c is None:
                data[m] = data.get(m, 0) + mult
            else:
                for j in bracket_monomials(n + c):
                    key = m + TriDegree(0, j, 0)
                    data[key] = data.get(key, 0) + mult
        return Poincare(data)

    def min_evaluable(self) -> int:
        """Smallest N at which every bracket index is nonnegative (at least 1)."""
        lo = 1
        for (_, c), _ in self._terms.items():
            if c is not None:
                lo = max(lo, -c)
        return lo

    def __repr__(self) -> str:
        return f"FamilyPoincare({format_family(self)!r})"


def _term_sort_key(item):
    (mono, c), _ = item
    return (mono.sort_key(), -1_000_000 if c is None else c)


def string_top_name(m: TriDegree, c: int) -> TriDegree:
    """Canonical a-merged name of the top of m*[N+c]."""
    return TriDegree(m.a + 1, m.q + c - 1, m.t2)


def string_bottom_name(m: TriDegree, c: int) -> TriDegree:
    """Canonical a-merged name of the bottom of m*[N+c]."""
    return TriDegree(m.a - 1, m.q - c + 1, m.t2)


# ---------------------------------------------------------------------------
# text format


def format_family(f: FamilyPoincare) -> str:
    parts = []
    for (mono, c), mult in f.items():
        body = fmt_monomial(mono)
        piece = ""
        if mult != 1:
            piece += str(mult)
        if c is not None:
            piece += f"[N{c:+d}]" if c else "[N]"
        if body != "1":
            piece += body
        elif not piece:
            piece = "1"
        elif c is None:
            pass  # bare multiplicity already emitted
        parts.append(piece)
    return " + ".join(parts) if parts else "0"


def format_poly(p: Poincare | FamilyPoincare) -> str:
    if isinstance(p, Poincare):
        p = FamilyPoincare.from_poincare(p)
    return format_family(p)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> PolynomialSyntax:
        before = self.text[: self.pos]
        line = before.count("\n") + 1
        column = self.pos - (before.rfind("\n") + 1)
        return PolynomialSyntax(msg, line, column)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def integer(self) -> int:
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-").isdigit():
            raise self.error("expected integer")
        return int(self.text[start:self.pos])


def parse_poly(text: str) -> FamilyPoincare:
    """Parse the polynomial grammar; returns a FamilyPoincare.

    Use .plain_part / .evaluate to get a Poincare, or parse_poincare below.
    """
    sc = _Scanner(text)
    terms: Dict[TermKey, int] = {}
    sc.skip_ws()
    if sc.pos >= len(sc.text):
        return FamilyPoincare()
    if sc.text.strip() == "0":
        return FamilyPoincare()
    while True:
        mono, c, mult = _parse_term(sc)
        key = (mono, c)
        terms[key] = terms.get(key, 0) + mult
        sc.skip_ws()
        if sc.pos >= len(sc.text):
            break
        if sc.peek() != "+":
            raise sc.error(f"expected '+' or end of input, got {sc.peek()!r}")
        sc.take()
        sc.skip_ws()
    return FamilyPoincare(terms)


def parse_poincare(text: str) -> Poincare:
    """Parse text that must not contain brackets."""
    fam = parse_poly(text)
    if fam.has_brackets:
        raise PolynomialSyntax("bracket term where a plain polynomial was expected")
    return fam.plain_part


def _parse_term(sc: _Scanner) -> Tuple[TriDegree, Optional[int], int]:
    sc.skip_ws()
    mult = 1
    saw_mult = False
    if sc.peek().isdigit():
        mult = sc.integer()
        saw_mult = True
        if mult <= 0:
            raise sc.error("multiplicity must be positive")
    sc.skip_ws()
    c: Optional[int] = None
    if sc.peek() == "[":
        sc.take()
        sc.skip_ws()
        if sc.take() != "N":
            raise sc.error("expected 'N' in bracket")
        sc.skip_ws()
        if sc.peek() in "+-":
            c = sc.integer()
        else:
            c = 0
        sc.skip_ws()
        if sc.take() != "]":
            raise sc.error("expected ']'")
    a = q = t2 = 0
    saw_factor = False
    while True:
        sc.skip_ws()
        ch = sc.peek()
        if ch not in ("a", "q", "t"):
            break
        sc.take()
        saw_factor = True
        num, den = 1, 1
        sc.skip_ws()
        if sc.peek() == "^":
            sc.take()
            sc.skip_ws()
            num = sc.integer()
            sc.skip_ws()
            if sc.peek() == "/":
                sc.take()
                sc.skip_ws()
                den = sc.integer()
                if den != 2:
                    raise sc.error("only halves are allowed as fractional exponents")
        if ch == "t":
            t2 += num * (2 // den)
        else:
            if den != 1:
                raise sc.error(f"fractional exponent on '{ch}'")
            if ch == "a":
                a += num
            else:
                q += num
    if not (saw_factor or saw_mult or c is not None):
        raise sc.error("empty term")
    return TriDegree(a, q, t2), c, mult
