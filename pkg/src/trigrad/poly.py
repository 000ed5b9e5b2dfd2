"""Poincare polynomials: graded dimension counts with exact integer arithmetic.

A Poincare value is a finite multiset of TriDegree monomials with positive
integer multiplicities.  There is deliberately no subtraction: these are
dimension counts.  Signed polynomials appear only as the output of the Euler
specialization (t -> -1), which lands in SignedLaurent.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, Mapping, Tuple

from .errors import HalfIntegerT
from .grading import TriDegree, fmt_monomial


class Poincare:
    """Immutable multiset of (a,q,t)-monomials with positive multiplicities."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[TriDegree, int] | Iterable[Tuple[TriDegree, int]] = ()):
        data: Dict[TriDegree, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, mult in items:
            if mult < 0:
                raise ValueError(f"negative multiplicity {mult} at {mono}")
            if mult:
                data[mono] = data.get(mono, 0) + mult
        self._terms = data

    @classmethod
    def zero(cls) -> "Poincare":
        return cls()

    @classmethod
    def one(cls) -> "Poincare":
        return cls({TriDegree(0, 0, 0): 1})

    @classmethod
    def monomial(cls, a: int = 0, q: int = 0, t2: int = 0, mult: int = 1) -> "Poincare":
        return cls({TriDegree(a, q, t2): mult})

    def items(self) -> Iterator[Tuple[TriDegree, int]]:
        return iter(sorted(self._terms.items(), key=lambda kv: kv[0].sort_key()))

    def __getitem__(self, mono: TriDegree) -> int:
        return self._terms.get(mono, 0)

    def __contains__(self, mono: TriDegree) -> bool:
        return mono in self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poincare) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    @property
    def total_dim(self) -> int:
        return sum(self._terms.values())

    def __add__(self, other: "Poincare") -> "Poincare":
        data = dict(self._terms)
        for mono, mult in other._terms.items():
            data[mono] = data.get(mono, 0) + mult
        return Poincare(data)

    def __mul__(self, other: "Poincare") -> "Poincare":
        data: Dict[TriDegree, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 + m2
                data[m] = data.get(m, 0) + c1 * c2
        return Poincare(data)

    def shift(self, d: TriDegree) -> "Poincare":
        return Poincare({mono + d: mult for mono, mult in self._terms.items()})

    def scale(self, k: int) -> "Poincare":
        if k < 0:
            raise ValueError("negative scale")
        if k == 0:
            return Poincare()
        return Poincare({m: k * c for m, c in self._terms.items()})

    def psi_dual(self) -> "Poincare":
        """The involution (a,q,t) -> (a^-1, q^-1, t^-1): negate every degree."""
        return Poincare({-mono: mult for mono, mult in self._terms.items()})

    def subtract(self, other: "Poincare") -> "Poincare":
        """Termwise difference; raises if any multiplicity would go negative."""
        data = dict(self._terms)
        for mono, mult in other._terms.items():
            have = data.get(mono, 0)
            if have < mult:
                raise ValueError(f"cannot remove {mult} of {fmt_monomial(mono)} (have {have})")
            if have == mult:
                del data[mono]
            else:
                data[mono] = have - mult
        return Poincare(data)

    def contains(self, other: "Poincare") -> bool:
        return all(self._terms.get(m, 0) >= c for m, c in other._terms.items())

    def euler_specialize(self) -> "SignedLaurent":
        """Substitute t = -1: signed Laurent polynomial in (a, q).

        Requires integer t-degrees.
        """
        data: Dict[Tuple[int, int], int] = {}
        for mono, mult in self._terms.items():
            if mono.t2 % 2:
                raise HalfIntegerT(f"odd doubled t-exponent in {fmt_monomial(mono)}")
            sign = -1 if (mono.t2 // 2) % 2 else 1
            key = (mono.a, mono.q)
            data[key] = data.get(key, 0) + sign * mult
        return SignedLaurent(data)

    def sl_specialize(self, n: int) -> "Poincare":
        """Collapse to the sl(n) bigrading: a^i q^j t^k -> q^(n*i+j) t^k.

        The result is a Poincare with zero a-exponents.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        data: Dict[TriDegree, int] = {}
        for mono, mult in self._terms.items():
            key = TriDegree(0, n * mono.a + mono.q, mono.t2)
            data[key] = data.get(key, 0) + mult
        return Poincare(data)

    def t_layers(self) -> Dict[int, "Poincare"]:
        """Split by doubled t-degree."""
        out: Dict[int, Dict[TriDegree, int]] = {}
        for mono, mult in self._terms.items():
            out.setdefault(mono.t2, {})[mono] = mult
        return {t2: Poincare(d) for t2, d in sorted(out.items())}

    def __repr__(self) -> str:
        return f"Poincare({format_poincare(self)!r})"


class SignedLaurent:
    """A signed Laurent polynomial in (a, q); output type of euler_specialize."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Tuple[int, int], int] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self._coeffs = {k: v for k, v in items if v != 0}

    def items(self):
        return iter(sorted(self._coeffs.items()))

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self._coeffs.get(key, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedLaurent) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __add__(self, other: "SignedLaurent") -> "SignedLaurent":
        data = dict(self._coeffs)
        for k, v in other._coeffs.items():
            data[k] = data.get(k, 0) + v
        return SignedLaurent(data)

    def __mul__(self, other: "SignedLaurent") -> "SignedLaurent":
        data: Dict[Tuple[int, int], int] = {}
        for (a1, q1), c1 in self._coeffs.items():
            for (a2, q2), c2 in other._coeffs.items():
                k = (a1 + a2, q1 + q2)
                data[k] = data.get(k, 0) + c1 * c2
        return SignedLaurent(data)

    def __repr__(self) -> str:
        return f"SignedLaurent({format_signed(self)!r})"


def format_poincare(p: Poincare) -> str:
    """Canonical text form: terms sorted by (t2, a, q), multiplicities prefixed."""
    parts = []
    for mono, mult in p.items():
        body = fmt_monomial(mono)
        if mult == 1:
            parts.append(body)
        elif body == "1":
            parts.append(str(mult))
        else:
            parts.append(f"{mult}{body}")
    return " + ".join(parts) if parts else "0"


def format_signed(s: SignedLaurent) -> str:
    """Signed canonical form, sorted by (a, q)."""
    parts = []
    for (a, qe), c in s.items():
        mono = fmt_monomial(TriDegree(a, qe, 0))
        mag = abs(c)
        if mono == "1":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"
